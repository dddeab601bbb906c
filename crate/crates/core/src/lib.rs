//! Johnson Coverage instances, ℓp gap gadgets, coverage-to-clustering
//! reductions and integrality-gap certificates.

pub mod codes;
pub mod embed;
pub mod error;
pub mod factors;
pub mod hvc;
pub mod io;
pub mod johnson;
pub mod metric;
pub mod reduce;
pub mod relax;
pub mod report;
pub mod subset;

pub use error::{Error, Result};
pub use metric::Metric;
pub use subset::{binom, Subset};
