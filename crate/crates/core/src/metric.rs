//! The ℓ0/ℓ1/ℓ2/ℓp distances used throughout.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Metric {
    /// Number of differing coordinates.
    L0,
    L1,
    L2,
    /// General `p >= 1`; `1` and `2` are normalized to [`Metric::L1`] / [`Metric::L2`].
    Lp(f64),
}

impl Metric {
    pub fn lp(p: f64) -> Result<Metric> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::invalid(format!("ℓp needs finite p >= 1, got {p}")));
        }
        Ok(if p == 1.0 {
            Metric::L1
        } else if p == 2.0 {
            Metric::L2
        } else {
            Metric::Lp(p)
        })
    }

    /// The exponent governing how distances add up over concatenated
    /// blocks: `ℓ` equal blocks scale a distance by `ℓ^{1/p}`.
    /// ℓ0 counts coordinates, so it concatenates like ℓ1.
    pub fn p(&self) -> f64 {
        match self {
            Metric::L0 | Metric::L1 => 1.0,
            Metric::L2 => 2.0,
            Metric::Lp(p) => *p,
        }
    }

    /// Integer-valued on integer data; distances can be compared exactly.
    pub fn is_exact(&self) -> bool {
        matches!(self, Metric::L0 | Metric::L1)
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Metric::L0 => diffs.filter(|d| *d != 0.0).count() as f64,
            Metric::L1 => diffs.sum(),
            Metric::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::Lp(p) => diffs.map(|d| d.powf(*p)).sum::<f64>().powf(1.0 / p),
        }
    }

    /// `‖a − b‖^exponent`, avoiding the square root for ℓ2 means.
    pub fn distance_pow(&self, a: &[f64], b: &[f64], exponent: u32) -> f64 {
        match (self, exponent) {
            (Metric::L2, 2) => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
            (_, 1) => self.distance(a, b),
            (_, e) => self.distance(a, b).powi(e as i32),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::L0 => f.write_str("l0"),
            Metric::L1 => f.write_str("l1"),
            Metric::L2 => f.write_str("l2"),
            Metric::Lp(p) => write!(f, "lp{p}"),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    /// Accepts `l0`, `l1`, `l2`, `l<p>`, `lp<p>` and `lp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "l0" {
            return Ok(Metric::L0);
        }
        let digits = lower
            .strip_prefix("lp:")
            .or_else(|| lower.strip_prefix("lp"))
            .or_else(|| lower.strip_prefix('l'))
            .ok_or_else(|| Error::invalid(format!("unknown metric {s:?}")))?;
        let p: f64 = digits
            .parse()
            .map_err(|_| Error::invalid(format!("unknown metric {s:?}")))?;
        Metric::lp(p)
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        let a = [0.0, 1.0, 2.0];
        let b = [1.0, 1.0, 0.0];
        assert_eq!(Metric::L0.distance(&a, &b), 2.0);
        assert_eq!(Metric::L1.distance(&a, &b), 3.0);
        assert_eq!(Metric::L2.distance_pow(&a, &b, 2), 5.0);
        assert!((Metric::Lp(3.0).distance(&a, &b) - 9f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn parse_and_display() {
        for (s, m) in [
            ("l1", Metric::L1),
            ("L2", Metric::L2),
            ("l0", Metric::L0),
            ("lp4", Metric::Lp(4.0)),
            ("lp:2", Metric::L2),
            ("l8", Metric::Lp(8.0)),
        ] {
            assert_eq!(s.parse::<Metric>().unwrap(), m);
        }
        assert_eq!(
            Metric::Lp(4.0).to_string().parse::<Metric>().unwrap(),
            Metric::Lp(4.0)
        );
        assert!("linf".parse::<Metric>().is_err());
        assert!("lp0.5".parse::<Metric>().is_err());
    }
}
