//! Reed–Solomon codes over prime fields.
//!
//! A message `(m_0, …, m_{η−1})` is the polynomial `Σ m_j X^j`, evaluated at
//! every field element `0, 1, …, q−1`. Two distinct codewords agree on at
//! most `η − 1` coordinates, so the relative distance is `1 − (η−1)/q`.
//! Universe elements `u ∈ [n]` are encoded through the base-`q` digits of
//! `u − 1`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Deterministic trial division; fine for the field sizes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RsCode {
    q: u64,
    eta: u32,
}

impl RsCode {
    pub fn new(q: u64, eta: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::invalid(format!("field size {q} is not prime")));
        }
        if eta == 0 || eta as u64 > q {
            return Err(Error::invalid(format!(
                "message length must satisfy 1 <= eta <= q, got eta={eta} q={q}"
            )));
        }
        Ok(RsCode { q, eta })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    /// Block length; one coordinate per field element.
    pub fn ell(&self) -> u64 {
        self.q
    }

    /// `1 − (η−1)/q`.
    pub fn relative_distance(&self) -> Ratio<u64> {
        Ratio::new(self.q - (self.eta as u64 - 1), self.q)
    }

    /// Number of distinct messages, `q^η` (saturating).
    pub fn message_count(&self) -> u128 {
        (self.q as u128).checked_pow(self.eta).unwrap_or(u128::MAX)
    }

    pub fn encode(&self, message: &[u64]) -> Result<Vec<u64>> {
        if message.len() != self.eta as usize {
            return Err(Error::invalid(format!(
                "message has {} symbols, expected {}",
                message.len(),
                self.eta
            )));
        }
        if let Some(&m) = message.iter().find(|&&m| m >= self.q) {
            return Err(Error::invalid(format!("symbol {m} outside F_{}", self.q)));
        }
        Ok(self.encode_unchecked(message))
    }

    fn encode_unchecked(&self, message: &[u64]) -> Vec<u64> {
        let q = self.q as u128;
        (0..self.q)
            .map(|point| {
                // Horner from the top coefficient down.
                message
                    .iter()
                    .rev()
                    .fold(0u128, |acc, &m| (acc * point as u128 + m as u128) % q)
                    as u64
            })
            .collect()
    }

    /// Base-`q` digits of `index`, least significant first.
    pub fn message_of(&self, index: u128) -> Result<Vec<u64>> {
        if index >= self.message_count() {
            return Err(Error::invalid(format!(
                "index {index} needs more than {} base-{} digits",
                self.eta, self.q
            )));
        }
        let mut rest = index;
        Ok((0..self.eta)
            .map(|_| {
                let d = (rest % self.q as u128) as u64;
                rest /= self.q as u128;
                d
            })
            .collect())
    }

    /// Codeword of the `index`-th message.
    pub fn encode_index(&self, index: u128) -> Result<Vec<u64>> {
        Ok(self.encode_unchecked(&self.message_of(index)?))
    }
}

pub fn rs_encode(code: &RsCode, message: &[u64]) -> Result<Vec<u64>> {
    code.encode(message)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    /// Every pair of codewords; returns the true minimum.
    Exhaustive,
    /// `pairs` random distinct message pairs; an upper bound on the minimum.
    Sampled { pairs: u64, seed: u64 },
}

fn agreements(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x == y).count() as u64
}

/// Minimum observed relative distance between distinct codewords.
///
/// In exhaustive mode `budget` caps the number of codeword pairs compared.
pub fn verify_relative_distance(
    code: &RsCode,
    mode: DistanceMode,
    budget: u128,
) -> Result<Ratio<u64>> {
    let total = code.message_count();
    let ell = code.ell();
    let mut worst_agree = 0u64;
    match mode {
        DistanceMode::Exhaustive => {
            let pairs = total.saturating_mul(total.saturating_sub(1)) / 2;
            Error::check_budget("exhaustive code distance", pairs, budget)?;
            let words: Vec<Vec<u64>> = (0..total)
                .map(|i| code.encode_index(i))
                .collect::<Result<_>>()?;
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    worst_agree = worst_agree.max(agreements(&words[i], &words[j]));
                }
            }
        }
        DistanceMode::Sampled { pairs, seed } => {
            if total < 2 {
                return Ok(Ratio::from_integer(1));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..pairs {
                let a = rng.random_range(0..total);
                let mut b = rng.random_range(0..total - 1);
                if b >= a {
                    b += 1;
                }
                let wa = code.encode_index(a)?;
                let wb = code.encode_index(b)?;
                worst_agree = worst_agree.max(agreements(&wa, &wb));
            }
        }
    }
    Ok(Ratio::new(ell - worst_agree, ell))
}

/// Parameters chosen for a reduction together with the quantities the
/// reduction's distance argument consumes.
#[derive(Clone, Debug, Serialize)]
pub struct CodeChoice {
    pub code: RsCode,
    /// `18·z·y/√q`, the slack subtracted from the gadget gap on non-covered pairs.
    pub union_bound_slack: f64,
    /// True when chosen by the relaxed rule rather than the asymptotic one.
    pub relaxed: bool,
}

fn eta_for(n: u64, q: u64) -> u32 {
    let mut eta = 1u32;
    let mut reach = q as u128;
    while reach < n as u128 {
        reach = reach.saturating_mul(q as u128);
        eta += 1;
    }
    eta
}

/// `1 − (η−1)/q ≥ 1 − 3/√q`, compared exactly as `(η−1)² ≤ 9q`.
fn meets_distance_requirement(code: &RsCode) -> bool {
    let e = code.eta as u128 - 1;
    e * e <= 9 * code.q as u128
}

fn finish(n: u64, z: u32, y: u32, q: u64, relaxed: bool) -> Result<CodeChoice> {
    let eta = eta_for(n, q);
    if eta as u64 > q {
        return Err(Error::invalid(format!(
            "universe n={n} needs eta={eta} > q={q}; choose a larger field"
        )));
    }
    let code = RsCode::new(q, eta)?;
    if !meets_distance_requirement(&code) {
        return Err(Error::invalid(format!(
            "relative distance 1-({}-1)/{q} falls below 1-3/sqrt(q); choose a larger field",
            eta
        )));
    }
    let union_bound_slack = 18.0 * z as f64 * y as f64 / (q as f64).sqrt();
    Ok(CodeChoice {
        code,
        union_bound_slack,
        relaxed,
    })
}

/// Asymptotic rule: the smallest prime `q > (18z²/(ε/11))²`, `η = ⌈log_q n⌉`.
pub fn pick_code_params(n: u64, z: u32, y: u32, eps: f64) -> Result<CodeChoice> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    let threshold = (18.0 * (z as f64).powi(2) / (eps / 11.0)).powi(2);
    if threshold >= 1e15 {
        return Err(Error::unsupported(format!(
            "field size threshold {threshold:.3e} is beyond trial-division range"
        )));
    }
    let q = next_prime(threshold.floor() as u64 + 1);
    finish(n, z, y, q, false)
}

/// A caller-chosen prime field, with `η` and the distance requirement
/// derived as for the other rules.
pub fn pick_code_params_with_field(n: u64, z: u32, y: u32, q: u64) -> Result<CodeChoice> {
    if !is_prime(q) {
        return Err(Error::invalid(format!("field size {q} is not prime")));
    }
    finish(n, z, y, q, true)
}

/// Desk-scale rule: the smallest prime `q >= max(18zy/ε, z)`, with the same
/// distance requirement re-verified.
pub fn pick_code_params_relaxed(n: u64, z: u32, y: u32, eps: f64) -> Result<CodeChoice> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    let target = (18.0 * z as f64 * y as f64 / eps).ceil() as u64;
    let q = next_prime(target.max(z as u64));
    finish(n, z, y, q, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(53) && is_prime(1297));
        assert!(!is_prime(1) && !is_prime(49) && !is_prime(1296));
        assert_eq!(next_prime(216), 223);
    }

    #[test]
    fn encode_examples() {
        let c = RsCode::new(5, 1).unwrap();
        assert_eq!(rs_encode(&c, &[3]).unwrap(), vec![3; 5]);
        let c = RsCode::new(5, 2).unwrap();
        assert_eq!(rs_encode(&c, &[0, 1]).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(rs_encode(&c, &[0]).is_err());
        assert!(rs_encode(&c, &[0, 5]).is_err());
    }

    #[test]
    fn q7_eta3_agreement_oracle() {
        // Brute force over all 7^3 messages: pairwise agreement <= 2.
        let c = RsCode::new(7, 3).unwrap();
        let words: Vec<_> = (0..343).map(|i| c.encode_index(i).unwrap()).collect();
        let mut worst = 0;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                worst = worst.max(agreements(&words[i], &words[j]));
            }
        }
        assert_eq!(worst, 2);
    }

    #[test]
    fn distance_examples() {
        let c = RsCode::new(5, 2).unwrap();
        assert_eq!(
            verify_relative_distance(&c, DistanceMode::Exhaustive, 1 << 20).unwrap(),
            Ratio::new(4, 5)
        );
        let c = RsCode::new(7, 1).unwrap();
        assert_eq!(
            verify_relative_distance(&c, DistanceMode::Exhaustive, 1 << 20).unwrap(),
            Ratio::from_integer(1)
        );
        let c = RsCode::new(53, 4).unwrap();
        assert_eq!(c.relative_distance(), Ratio::new(50, 53));
        assert!(50.0 / 53.0 >= 1.0 - 3.0 / 53f64.sqrt());
        let sampled = verify_relative_distance(
            &c,
            DistanceMode::Sampled {
                pairs: 10_000,
                seed: 1,
            },
            0,
        )
        .unwrap();
        assert!(sampled >= c.relative_distance());
        assert!(matches!(
            verify_relative_distance(&c, DistanceMode::Exhaustive, 1000),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn exhaustive_matches_formula() {
        for q in [2u64, 3, 5, 7] {
            for eta in 1..=3u32.min(q as u32) {
                let c = RsCode::new(q, eta).unwrap();
                assert_eq!(
                    verify_relative_distance(&c, DistanceMode::Exhaustive, 1 << 20).unwrap(),
                    c.relative_distance(),
                    "q={q} eta={eta}"
                );
            }
        }
    }

    #[test]
    fn param_choice() {
        let strict = pick_code_params(16, 3, 2, 0.55).unwrap();
        assert!(strict.code.q() as f64 > (18.0 * 9.0 / 0.05f64).powi(2));
        assert!(is_prime(strict.code.q()));
        assert_eq!(strict.code.eta(), 1);

        let relaxed = pick_code_params_relaxed(16, 3, 2, 0.5).unwrap();
        assert_eq!(relaxed.code.q(), 223);
        assert!(relaxed.relaxed);

        let c = finish(49, 3, 2, 7, true).unwrap();
        assert_eq!(c.code.eta(), 2);
        assert_eq!(c.code.relative_distance(), Ratio::new(6, 7));

        assert!(pick_code_params(16, 3, 2, 1.5).is_err());
    }

    #[test]
    fn explicit_field_choice() {
        let c = pick_code_params_with_field(20, 3, 2, 5).unwrap();
        assert_eq!((c.code.q(), c.code.eta()), (5, 2));
        assert!(c.relaxed);
        assert!(pick_code_params_with_field(20, 3, 2, 6).is_err());
        // n = 2^5 needs eta = 6 > q = 2.
        assert!(pick_code_params_with_field(64, 3, 2, 2).is_err());
    }

    proptest! {
        #[test]
        fn encoding_is_linear(m1 in prop::collection::vec(0u64..11, 3), m2 in prop::collection::vec(0u64..11, 3)) {
            let c = RsCode::new(11, 3).unwrap();
            let sum: Vec<u64> = m1.iter().zip(&m2).map(|(a, b)| (a + b) % 11).collect();
            let lhs = c.encode(&sum).unwrap();
            let rhs: Vec<u64> = c.encode(&m1).unwrap().iter().zip(c.encode(&m2).unwrap())
                .map(|(a, b)| (a + b) % 11).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn relaxed_choice_meets_requirement(n in 1u64..100_000, z in 2u32..6, eps in 0.05f64..0.95) {
            let y = z - 1;
            if let Ok(choice) = pick_code_params_relaxed(n, z, y, eps) {
                prop_assert!(meets_distance_requirement(&choice.code));
                prop_assert!(choice.code.message_count() >= n as u128);
            }
        }
    }
}
