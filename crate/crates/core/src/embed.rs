//! Gap realizations of the bipartite Johnson graph `J(q,t,s)`.
//!
//! Left vertices are the `t`-subsets of `{1,…,q}`, right vertices the
//! `s`-subsets, and `S ~ T` iff `S ⊂ T`. A realization maps both sides into
//! `R^q` so that every edge sits at one common distance `β` and every
//! non-edge at distance at least `λ·β`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::subset::{all_subsets, binom, Subset};

/// Relative slack allowed on float distances.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    /// 0/1 indicator vectors on both sides.
    Indicator,
    /// Indicators for big sets, `√(t/s)`-scaled indicators for small sets.
    ScaledIndicator,
    /// Indicators for big sets, `½·1 + indicator` for small sets (`s = t − 1`).
    HalfShift,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRealization {
    pub metric: Metric,
    pub kind: GadgetKind,
    pub q: u32,
    pub t: u32,
    pub s: u32,
    pub dim: usize,
    pub beta: f64,
    pub lambda_claimed: f64,
}

fn check_params(q: u32, t: u32, s: u32) -> Result<()> {
    if !(s >= 1 && s < t && t <= q) {
        return Err(Error::invalid(format!(
            "need q >= t > s >= 1, got q={q} t={t} s={s}"
        )));
    }
    Ok(())
}

/// Indicator realization; valid for ℓ1 and, since the vectors are binary, ℓ0.
pub fn embed_indicator(metric: Metric, q: u32, t: u32, s: u32) -> Result<GapRealization> {
    check_params(q, t, s)?;
    if !metric.is_exact() {
        return Err(Error::invalid(format!(
            "indicator realization is certified for l0/l1 only, got {metric}"
        )));
    }
    let d = (t - s) as f64;
    Ok(GapRealization {
        metric,
        kind: GadgetKind::Indicator,
        q,
        t,
        s,
        dim: q as usize,
        beta: d,
        lambda_claimed: (d + 2.0) / d,
    })
}

pub fn embed_l1(q: u32, t: u32, s: u32) -> Result<GapRealization> {
    embed_indicator(Metric::L1, q, t, s)
}

pub fn embed_l2_scaled(q: u32, t: u32, s: u32) -> Result<GapRealization> {
    check_params(q, t, s)?;
    let (tf, sf) = (t as f64, s as f64);
    let root = (tf * sf).sqrt();
    Ok(GapRealization {
        metric: Metric::L2,
        kind: GadgetKind::ScaledIndicator,
        q,
        t,
        s,
        dim: q as usize,
        beta: 2f64.sqrt() * (tf - root).sqrt(),
        lambda_claimed: (1.0 + 1.0 / (root - sf)).sqrt(),
    })
}

pub fn embed_lp_halfshift(q: u32, t: u32, p: f64) -> Result<GapRealization> {
    if t < 2 {
        return Err(Error::invalid(format!(
            "half-shift realization needs t >= 2, got {t}"
        )));
    }
    check_params(q, t, t - 1)?;
    let metric = Metric::lp(p)?;
    let scale = (q as f64).powf(1.0 / p);
    Ok(GapRealization {
        metric,
        kind: GadgetKind::HalfShift,
        q,
        t,
        s: t - 1,
        dim: q as usize,
        beta: scale / 2.0,
        lambda_claimed: 3.0 / scale,
    })
}

impl GapRealization {
    /// Vector of a `t`- or `s`-subset of `{1,…,q}`.
    pub fn vector(&self, x: &Subset) -> Result<Vec<f64>> {
        let size = x.len() as u32;
        if size != self.t && size != self.s {
            return Err(Error::invalid(format!(
                "set {x} has size {size}, realization maps sizes {} and {}",
                self.t, self.s
            )));
        }
        x.check_shape(x.len(), 1, self.q)?;
        Ok(if size == self.t {
            self.big_vector(x)
        } else {
            self.small_vector(x)
        })
    }

    pub(crate) fn big_vector(&self, x: &Subset) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for &e in x.elems() {
            v[e as usize - 1] = 1.0;
        }
        v
    }

    pub(crate) fn small_vector(&self, x: &Subset) -> Vec<f64> {
        let (base, on) = match self.kind {
            GadgetKind::Indicator => (0.0, 1.0),
            GadgetKind::ScaledIndicator => (0.0, (self.t as f64 / self.s as f64).sqrt()),
            GadgetKind::HalfShift => (0.5, 1.5),
        };
        let mut v = vec![base; self.dim];
        for &e in x.elems() {
            v[e as usize - 1] = on;
        }
        v
    }

    /// All pairs are integer distances: ℓ0/ℓ1 on indicator vectors.
    pub fn is_integral(&self) -> bool {
        self.metric.is_exact() && self.kind == GadgetKind::Indicator
    }

    /// `C(q,t)·C(q,s)`, the size of an exhaustive check.
    pub fn pair_count(&self) -> u128 {
        binom(self.q as u64, self.t as u64).saturating_mul(binom(self.q as u64, self.s as u64))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapPair {
    pub big: Subset,
    pub small: Subset,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub metric: Metric,
    pub q: u32,
    pub t: u32,
    pub s: u32,
    pub beta: f64,
    pub lambda_claimed: f64,
    pub restricted: bool,
    pub pairs_checked: u128,
    pub edge_pairs: u128,
    pub nonedge_pairs: u128,
    pub edge_distance_min: f64,
    pub edge_distance_max: f64,
    pub min_nonedge_distance: Option<f64>,
    /// Minimum non-edge distance over maximum edge distance; `None` when
    /// the checked graph has no non-edges.
    pub min_nonedge_over_edge: Option<f64>,
    pub worst_pair: Option<GapPair>,
    /// Exact integer edge distance, when every edge distance is that integer.
    pub exact_edge_distance: Option<u64>,
    pub exact_min_nonedge_distance: Option<u64>,
}

#[derive(Clone, Debug)]
struct Partial {
    edges: u128,
    nonedges: u128,
    edge_min: f64,
    edge_max: f64,
    worst: Option<(f64, usize, usize)>,
}

impl Partial {
    fn empty() -> Self {
        Partial {
            edges: 0,
            nonedges: 0,
            edge_min: f64::INFINITY,
            edge_max: f64::NEG_INFINITY,
            worst: None,
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.edges += other.edges;
        self.nonedges += other.nonedges;
        self.edge_min = self.edge_min.min(other.edge_min);
        self.edge_max = self.edge_max.max(other.edge_max);
        self.worst = match (self.worst, other.worst) {
            (None, w) | (w, None) => w,
            // Smallest distance, then the lexicographically first pair.
            (Some(a), Some(b)) => {
                if b.0
                    .total_cmp(&a.0)
                    .then((b.1, b.2).cmp(&(a.1, a.2)))
                    .is_lt()
                {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        };
        self
    }
}

/// Computes every edge and non-edge distance without certifying anything.
///
/// `edge_subset` restricts the big side to the given `t`-sets; the small
/// side is always every `s`-set.
pub fn measure_gap_realization(
    real: &GapRealization,
    edge_subset: Option<&[Subset]>,
    budget: u128,
) -> Result<GapReport> {
    let smalls = all_subsets(1, real.q, real.s as usize);
    let bigs: Vec<Subset> = match edge_subset {
        Some(list) => {
            for b in list {
                b.check_shape(real.t as usize, 1, real.q)?;
            }
            let mut v = list.to_vec();
            v.sort();
            v.dedup();
            v
        }
        None => all_subsets(1, real.q, real.t as usize),
    };
    let pairs = (bigs.len() as u128).saturating_mul(smalls.len() as u128);
    Error::check_budget("gap realization pairs", pairs, budget)?;

    let small_vecs: Vec<Vec<f64>> = smalls.iter().map(|s| real.small_vector(s)).collect();
    let total = bigs
        .par_iter()
        .enumerate()
        .map(|(bi, big)| {
            let bv = real.big_vector(big);
            let mut part = Partial::empty();
            for (si, small) in smalls.iter().enumerate() {
                let d = real.metric.distance(&bv, &small_vecs[si]);
                if small.is_subset_of(big) {
                    part.edges += 1;
                    part.edge_min = part.edge_min.min(d);
                    part.edge_max = part.edge_max.max(d);
                } else {
                    part.nonedges += 1;
                    if part.worst.is_none_or(|w| d < w.0) {
                        part.worst = Some((d, bi, si));
                    }
                }
            }
            part
        })
        .reduce(Partial::empty, Partial::merge);

    let min_nonedge = total.worst.map(|w| w.0);
    let ratio = min_nonedge.map(|d| d / total.edge_max);
    let integral = real.is_integral();
    let as_int = |d: f64| (integral && d.fract() == 0.0 && d >= 0.0).then_some(d as u64);
    let exact_edge = if total.edge_min == total.edge_max {
        as_int(total.edge_min)
    } else {
        None
    };
    Ok(GapReport {
        metric: real.metric,
        q: real.q,
        t: real.t,
        s: real.s,
        beta: real.beta,
        lambda_claimed: real.lambda_claimed,
        restricted: edge_subset.is_some(),
        pairs_checked: pairs,
        edge_pairs: total.edges,
        nonedge_pairs: total.nonedges,
        edge_distance_min: total.edge_min,
        edge_distance_max: total.edge_max,
        min_nonedge_distance: min_nonedge,
        min_nonedge_over_edge: ratio,
        worst_pair: total.worst.map(|(d, bi, si)| GapPair {
            big: bigs[bi].clone(),
            small: smalls[si].clone(),
            distance: d,
        }),
        exact_edge_distance: exact_edge,
        exact_min_nonedge_distance: min_nonedge.and_then(as_int),
    })
}

/// Exhaustive certification of a realization.
///
/// Fails when an edge distance strays from `β`, when the observed ratio
/// falls below the claimed gap, or (unrestricted, `s = t − 1`) when it
/// exceeds 3, which the triangle inequality along a 3-path forbids.
pub fn verify_gap_realization(
    real: &GapRealization,
    edge_subset: Option<&[Subset]>,
    budget: u128,
) -> Result<GapReport> {
    let report = measure_gap_realization(real, edge_subset, budget)?;
    let tol = if real.is_integral() {
        0.0
    } else {
        FLOAT_TOL * real.beta.max(1.0)
    };
    if report.edge_pairs > 0
        && ((report.edge_distance_min - real.beta).abs() > tol
            || (report.edge_distance_max - real.beta).abs() > tol)
    {
        return Err(Error::Certification {
            reason: format!(
                "edge distances span [{}, {}], expected {}",
                report.edge_distance_min, report.edge_distance_max, real.beta
            ),
            witness: format!("{} {} {}", real.metric, real.q, real.t),
        });
    }
    if let (Some(ratio), Some(worst)) = (report.min_nonedge_over_edge, &report.worst_pair) {
        if ratio < real.lambda_claimed - FLOAT_TOL {
            return Err(Error::Certification {
                reason: format!("ratio {ratio} below claimed {}", real.lambda_claimed),
                witness: format!("{} vs {} at {}", worst.big, worst.small, worst.distance),
            });
        }
        if edge_subset.is_none() && real.s + 1 == real.t && ratio > 3.0 + FLOAT_TOL {
            return Err(Error::Certification {
                reason: format!("ratio {ratio} exceeds the 3-path ceiling 3"),
                witness: format!("{} vs {} at {}", worst.big, worst.small, worst.distance),
            });
        }
    }
    Ok(report)
}

/// Writes one line per vertex, `label v_1 … v_q`: big sets first, then
/// small sets, each in lexicographic order.
pub fn export_text<W: Write>(real: &GapRealization, mut out: W) -> Result<()> {
    for (size, big) in [(real.t, true), (real.s, false)] {
        for x in all_subsets(1, real.q, size as usize) {
            let v = if big {
                real.big_vector(&x)
            } else {
                real.small_vector(&x)
            };
            write!(out, "{x}")?;
            for c in v {
                write!(out, " {c}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
