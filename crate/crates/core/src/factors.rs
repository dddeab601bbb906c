//! Closed-form constants: the random-cover Turán product and the
//! inapproximability factors obtained from a coverage gap and a gadget gap.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{ser_bigrational, to_f64};
use crate::subset::binom;

/// `∏_{i=1}^{z} (1 − (i−1)/(C(z,2) − 1))`, exactly.
///
/// This is the fraction of `z`-cliques left uncovered when the edge set is
/// the disjoint union of `C(z,2) − 1` equal cliques; it tends to `1/e`.
/// `z = 2` is rejected because the denominator vanishes.
pub fn turan_random_uncovered(z: u32) -> Result<BigRational> {
    if z < 3 {
        return Err(Error::invalid(format!(
            "Turán product needs z >= 3 (C(z,2) - 1 must be positive), got z={z}"
        )));
    }
    let w = BigInt::from(binom(z as u64, 2) - 1);
    let mut acc = BigRational::one();
    for i in 1..=z {
        let term = BigRational::one() - BigRational::new(BigInt::from(i - 1), w.clone());
        acc *= term;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Metric family of a factor table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorMetric {
    L1,
    L2,
    /// The `p → ∞` limit of the half-shift gadget (co-arity 1 only).
    LimitInfinity,
}

/// Gadget gap lower bound together with the two derived hardness factors.
#[derive(Clone, Debug, Serialize)]
pub struct FactorTable {
    pub metric: FactorMetric,
    pub delta: u32,
    pub alpha: f64,
    pub gamma_lower: f64,
    /// `1 + (1−α)(γ−1)`, the k-median factor.
    pub zeta1: f64,
    /// `1 + (1−α)(γ²−1)`, the k-means factor.
    pub zeta2: f64,
}

fn zetas(alpha: f64, gamma: f64) -> (f64, f64) {
    (
        1.0 + (1.0 - alpha) * (gamma - 1.0),
        1.0 + (1.0 - alpha) * (gamma * gamma - 1.0),
    )
}

/// Certified lower bound on the gap number infimum for co-arity `delta`.
///
/// ℓ1: `(Δ+2)/Δ`, attained by indicator vectors. ℓ2: `√((Δ+2)/Δ)`, the
/// `t → ∞` limit of the scaled-indicator bound with `s = t − Δ`.
pub fn gamma_lower(metric: FactorMetric, delta: u32) -> Result<f64> {
    if delta == 0 {
        return Err(Error::invalid("co-arity delta must be >= 1"));
    }
    let d = delta as f64;
    match metric {
        FactorMetric::L1 => Ok((d + 2.0) / d),
        FactorMetric::L2 => Ok(((d + 2.0) / d).sqrt()),
        FactorMetric::LimitInfinity if delta == 1 => Ok(3.0),
        FactorMetric::LimitInfinity => Err(Error::unsupported(
            "the p → ∞ limit is only tabulated for co-arity 1",
        )),
    }
}

pub fn inapprox_factors(metric: FactorMetric, delta: u32, alpha: f64) -> Result<FactorTable> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "alpha must lie in [0,1], got {alpha}"
        )));
    }
    let gamma = gamma_lower(metric, delta)?;
    let (zeta1, zeta2) = zetas(alpha, gamma);
    Ok(FactorTable {
        metric,
        delta,
        alpha,
        gamma_lower: gamma,
        zeta1,
        zeta2,
    })
}

/// Factor table from an externally certified gap `gamma` (e.g. a verified
/// ℓp gadget), for metrics without a closed form.
pub fn factors_from_gamma(delta: u32, alpha: f64, gamma: f64) -> Result<(f64, f64)> {
    if delta == 0 || !(0.0..=1.0).contains(&alpha) || gamma < 1.0 {
        return Err(Error::invalid(format!(
            "need delta >= 1, alpha in [0,1], gamma >= 1; got {delta}, {alpha}, {gamma}"
        )));
    }
    Ok(zetas(alpha, gamma))
}

/// Exact ℓ1 factors for a rational soundness `alpha`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactFactors {
    #[serde(serialize_with = "ser_bigrational")]
    pub gamma: BigRational,
    #[serde(serialize_with = "ser_bigrational")]
    pub zeta1: BigRational,
    #[serde(serialize_with = "ser_bigrational")]
    pub zeta2: BigRational,
}

pub fn inapprox_factors_l1_exact(delta: u32, alpha: &BigRational) -> Result<ExactFactors> {
    if delta == 0 {
        return Err(Error::invalid("co-arity delta must be >= 1"));
    }
    if alpha < &BigRational::zero() || alpha > &BigRational::one() {
        return Err(Error::invalid(format!(
            "alpha must lie in [0,1], got {alpha}"
        )));
    }
    let gamma = BigRational::new(BigInt::from(delta + 2), BigInt::from(delta));
    let one = BigRational::one();
    let slack = &one - alpha;
    let zeta1 = &one + &slack * (&gamma - &one);
    let zeta2 = &one + &slack * (&gamma * &gamma - &one);
    Ok(ExactFactors {
        gamma,
        zeta1,
        zeta2,
    })
}

/// `√(1 + 1/(√(ts) − s))`, the scaled-indicator ℓ2 gap for `J(q,t,s)`.
pub fn l2_scaled_gap(t: u32, s: u32) -> f64 {
    let (t, s) = (t as f64, s as f64);
    (1.0 + 1.0 / ((t * s).sqrt() - s)).sqrt()
}

pub fn turan_value_f64(z: u32) -> Result<f64> {
    turan_random_uncovered(z).map(|r| to_f64(&r))
}
