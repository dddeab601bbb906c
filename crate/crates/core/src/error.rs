use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module.
///
/// The CLI maps these onto exit statuses: validation-type errors are usage
/// errors (2), certification and convergence failures are 1, and an
/// exceeded enumeration budget is 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("budget exceeded: {what} needs {needed} units, budget is {budget}")]
    Budget {
        what: String,
        needed: u128,
        budget: u128,
    },

    #[error("certification failed: {reason} (worst witness: {witness})")]
    Certification { reason: String, witness: String },

    #[error("did not converge: {0}")]
    Convergence(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Checks `needed` against `budget`, producing [`Error::Budget`] when over.
    pub(crate) fn check_budget(what: &str, needed: u128, budget: u128) -> Result<()> {
        if needed > budget {
            Err(Error::Budget {
                what: what.to_string(),
                needed,
                budget,
            })
        } else {
            Ok(())
        }
    }
}
