//! Coverage-to-clustering reductions and the cost oracles used to check them.

use std::collections::HashMap;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::RsCode;
use crate::embed::{GapRealization, FLOAT_TOL};
use crate::error::{Error, Result};
use crate::johnson::JohnsonInstance;
use crate::metric::Metric;
use crate::report::ser_opt_bigrational;
use crate::subset::{all_subsets, binom, Subset};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledPoint {
    pub label: String,
    pub coords: Vec<f64>,
}

/// Construction constants of a reduced instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionMeta {
    pub beta: f64,
    pub ell: u64,
    pub q: u64,
    pub lambda: f64,
    pub p: f64,
    /// `18·z·y/√q`, subtracted from `lambda` on non-covered pairs to absorb
    /// blocks where codewords collide.
    pub slack: f64,
}

impl ReductionMeta {
    /// `β·ℓ^{1/p}`: the distance of every covered point to a covering center.
    pub fn base_distance(&self) -> f64 {
        self.beta * (self.ell as f64).powf(1.0 / self.p)
    }

    /// `(λ − slack)·β·ℓ^{1/p}`: lower bound for non-covered pairs.
    pub fn soundness_floor(&self) -> f64 {
        (self.lambda - self.slack) * self.base_distance()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusteringInstance {
    pub points: Vec<LabeledPoint>,
    /// Candidate centers; empty for continuous instances.
    pub centers: Vec<LabeledPoint>,
    pub k: usize,
    pub metric: Metric,
    pub exponent: u32,
    pub meta: Option<ReductionMeta>,
}

impl ClusteringInstance {
    pub fn new(
        points: Vec<LabeledPoint>,
        centers: Vec<LabeledPoint>,
        k: usize,
        metric: Metric,
        exponent: u32,
        meta: Option<ReductionMeta>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be >= 1"));
        }
        if exponent != 1 && exponent != 2 {
            return Err(Error::invalid(format!(
                "exponent must be 1 or 2, got {exponent}"
            )));
        }
        let ci = ClusteringInstance {
            points,
            centers,
            k,
            metric,
            exponent,
            meta,
        };
        let dim = ci.dim();
        if let Some(p) = ci
            .points
            .iter()
            .chain(&ci.centers)
            .find(|p| p.coords.len() != dim)
        {
            return Err(Error::invalid(format!(
                "vector {} has dimension {}, expected {dim}",
                p.label,
                p.coords.len()
            )));
        }
        Ok(ci)
    }

    pub fn dim(&self) -> usize {
        self.points
            .first()
            .or(self.centers.first())
            .map_or(0, |p| p.coords.len())
    }

    pub fn is_discrete(&self) -> bool {
        !self.centers.is_empty()
    }

    pub fn point_vectors(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.coords.clone()).collect()
    }

    pub fn center_vectors(&self, indices: &[usize]) -> Result<Vec<Vec<f64>>> {
        indices
            .iter()
            .map(|&i| {
                self.centers
                    .get(i)
                    .map(|c| c.coords.clone())
                    .ok_or_else(|| Error::invalid(format!("center index {i} out of range")))
            })
            .collect()
    }

    /// Index of the center labelled `label`.
    pub fn center_index(&self, label: &str) -> Option<usize> {
        self.centers.iter().position(|c| c.label == label)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterScope {
    /// Every `y`-subset of the universe.
    All,
    /// Only `y`-subsets of some edge.
    EdgeSubsets,
}

/// Maps universe element `u` to its codeword and, per block, a set of
/// field symbols shifted into `{1,…,q}`.
struct BlockEncoder<'a> {
    words: Vec<Vec<u64>>,
    real: &'a GapRealization,
}

impl BlockEncoder<'_> {
    /// Symbols of `x` in one block, padded with the smallest absent symbols
    /// when codewords collide so that the size stays `|x|`.
    fn block_set(&self, x: &Subset, block: usize) -> Subset {
        let mut syms: Vec<u32> = x
            .elems()
            .iter()
            .map(|&u| self.words[u as usize - 1][block] as u32 + 1)
            .collect();
        syms.sort_unstable();
        syms.dedup();
        let mut pad = 1u32;
        while syms.len() < x.len() {
            if syms.binary_search(&pad).is_err() {
                syms.push(pad);
                syms.sort_unstable();
            }
            pad += 1;
        }
        Subset::from_sorted(syms)
    }

    fn encode(&self, x: &Subset, big: bool) -> Vec<f64> {
        let ell = self.words.first().map_or(0, Vec::len);
        let mut out = Vec::with_capacity(ell * self.real.dim);
        for block in 0..ell {
            let set = self.block_set(x, block);
            if big {
                out.extend(self.real.big_vector(&set));
            } else {
                out.extend(self.real.small_vector(&set));
            }
        }
        out
    }
}

/// Composes a code with a gap realization of `J(q,z,y)`.
///
/// Each point (edge `T`) and center (`y`-set `S`) becomes the concatenation
/// over code coordinates of the realization's vector for the set of symbols
/// its elements carry there. `budget` caps the total number of coordinates.
pub fn build_discrete_instance(
    inst: &JohnsonInstance,
    code: &RsCode,
    real: &GapRealization,
    scope: CenterScope,
    exponent: u32,
    budget: u128,
) -> Result<ClusteringInstance> {
    if real.q as u64 != code.q() || real.t != inst.z() || real.s != inst.y() {
        return Err(Error::invalid(format!(
            "realization J({},{},{}) does not match code field {} and instance z={} y={}",
            real.q,
            real.t,
            real.s,
            code.q(),
            inst.z(),
            inst.y()
        )));
    }
    if code.message_count() < inst.n() as u128 {
        return Err(Error::invalid(format!(
            "code has {} messages, universe has {}",
            code.message_count(),
            inst.n()
        )));
    }
    let centers: Vec<Subset> = match scope {
        CenterScope::All => all_subsets(1, inst.n(), inst.y() as usize),
        CenterScope::EdgeSubsets => {
            let mut v: Vec<Subset> = inst
                .edges()
                .iter()
                .flat_map(|e| {
                    e.elems()
                        .iter()
                        .copied()
                        .combinations(inst.y() as usize)
                        .map(Subset::from_sorted)
                })
                .collect();
            v.sort();
            v.dedup();
            v
        }
    };
    let dim = code.ell() as u128 * real.dim as u128;
    let coords = dim.saturating_mul((inst.edges().len() + centers.len()) as u128);
    Error::check_budget("reduced instance coordinates", coords, budget)?;

    let words = (0..inst.n() as u128)
        .map(|u| code.encode_index(u))
        .collect::<Result<Vec<_>>>()?;
    let enc = BlockEncoder { words, real };
    let points = inst
        .edges()
        .par_iter()
        .map(|t| LabeledPoint {
            label: t.to_string(),
            coords: enc.encode(t, true),
        })
        .collect();
    let centers = centers
        .par_iter()
        .map(|s| LabeledPoint {
            label: s.to_string(),
            coords: enc.encode(s, false),
        })
        .collect();
    let meta = ReductionMeta {
        beta: real.beta,
        ell: code.ell(),
        q: code.q(),
        lambda: real.lambda_claimed,
        p: real.metric.p(),
        slack: 18.0 * inst.z() as f64 * inst.y() as f64 / (code.q() as f64).sqrt(),
    };
    ClusteringInstance::new(
        points,
        centers,
        inst.k() as usize,
        real.metric,
        exponent,
        Some(meta),
    )
}

/// Points are the 0/1 indicator vectors of the edges; no candidate centers.
pub fn build_continuous_indicator_instance(
    inst: &JohnsonInstance,
    metric: Metric,
    exponent: u32,
) -> Result<ClusteringInstance> {
    let n = inst.n() as usize;
    let points = inst
        .edges()
        .iter()
        .map(|t| {
            let mut v = vec![0.0; n];
            for &e in t.elems() {
                v[e as usize - 1] = 1.0;
            }
            LabeledPoint {
                label: t.to_string(),
                coords: v,
            }
        })
        .collect();
    ClusteringInstance::new(
        points,
        Vec::new(),
        inst.k() as usize,
        metric,
        exponent,
        None,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct Assignment {
    pub center: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CostBreakdown {
    pub total: f64,
    /// Exact total for ℓ0/ℓ1 instances.
    #[serde(serialize_with = "ser_opt_bigrational")]
    pub total_exact: Option<BigRational>,
    pub per_point: Vec<Assignment>,
    /// Points whose distance equals the base distance, when the instance
    /// carries reduction constants.
    pub at_base: Option<usize>,
}

fn exact_distance(metric: Metric, a: &[f64], b: &[f64]) -> Option<BigRational> {
    let mut acc = BigRational::zero();
    for (x, y) in a.iter().zip(b) {
        let d = BigRational::from_float(*x)? - BigRational::from_float(*y)?;
        match metric {
            Metric::L1 => acc += d.abs(),
            Metric::L0 if !d.is_zero() => acc += BigRational::from_integer(1.into()),
            Metric::L0 => {}
            _ => return None,
        }
    }
    Some(acc)
}

/// Order-independent float sum.
fn stable_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Assigns every point to its nearest chosen center (ties to the lowest
/// index) and sums `distance^exponent`.
pub fn clustering_cost(ci: &ClusteringInstance, chosen: &[Vec<f64>]) -> Result<CostBreakdown> {
    if chosen.is_empty() {
        return Err(Error::invalid("no centers chosen"));
    }
    if chosen.len() > ci.k {
        return Err(Error::invalid(format!(
            "{} centers chosen, budget k={}",
            chosen.len(),
            ci.k
        )));
    }
    let dim = ci.dim();
    if let Some(c) = chosen.iter().find(|c| c.len() != dim) {
        return Err(Error::invalid(format!(
            "center has dimension {}, expected {dim}",
            c.len()
        )));
    }
    let per_point: Vec<Assignment> = ci
        .points
        .par_iter()
        .map(|p| {
            let mut best = Assignment {
                center: 0,
                distance: f64::INFINITY,
            };
            for (i, c) in chosen.iter().enumerate() {
                let d = ci.metric.distance(&p.coords, c);
                if d < best.distance {
                    best = Assignment {
                        center: i,
                        distance: d,
                    };
                }
            }
            best
        })
        .collect();
    let e = ci.exponent as i32;
    let total = stable_sum(per_point.iter().map(|a| a.distance.powi(e)).collect());
    let total_exact = if ci.metric.is_exact() {
        ci.points
            .par_iter()
            .zip(&per_point)
            .map(|(p, a)| {
                exact_distance(ci.metric, &p.coords, &chosen[a.center])
                    .map(|d| num_traits::pow(d, e as usize))
            })
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().fold(BigRational::zero(), |s, d| s + d))
    } else {
        None
    };
    let at_base = ci.meta.as_ref().map(|m| {
        let base = m.base_distance();
        per_point
            .iter()
            .filter(|a| (a.distance - base).abs() <= FLOAT_TOL * base.max(1.0))
            .count()
    });
    Ok(CostBreakdown {
        total,
        total_exact,
        per_point,
        at_base,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PointProfile {
    pub point: usize,
    /// Some chosen center's source set lies inside the point's source set.
    pub covered: bool,
    pub distance: f64,
}

/// Nearest-center distance of every point, split by whether the point's
/// source set is covered by a chosen center's source set.
pub fn coverage_distance_profile(
    ci: &ClusteringInstance,
    chosen: &[usize],
) -> Result<Vec<PointProfile>> {
    let parse = |p: &LabeledPoint| {
        p.label
            .parse::<Subset>()
            .map_err(|_| Error::invalid(format!("label {} is not a set", p.label)))
    };
    let sources: Vec<Subset> = chosen
        .iter()
        .map(|&i| {
            ci.centers
                .get(i)
                .ok_or_else(|| Error::invalid(format!("center index {i} out of range")))
                .and_then(parse)
        })
        .collect::<Result<_>>()?;
    let vecs = ci.center_vectors(chosen)?;
    ci.points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let label = parse(p)?;
            let distance = vecs
                .iter()
                .map(|c| ci.metric.distance(&p.coords, c))
                .fold(f64::INFINITY, f64::min);
            Ok(PointProfile {
                point: i,
                covered: sources.iter().any(|s| s.is_subset_of(&label)),
                distance,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionCost {
    /// `Σ_i (1/(2|C_i|)) Σ_{p,q∈C_i} ‖p−q‖²`.
    pub pairwise: f64,
    /// `Σ_i Σ_{p∈C_i} ‖p − centroid(C_i)‖²`.
    pub centroid: f64,
}

fn check_partition(n: usize, partition: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; n];
    for part in partition {
        if part.is_empty() {
            return Err(Error::invalid("partition has an empty part"));
        }
        for &i in part {
            if i >= n || seen[i] {
                return Err(Error::invalid(format!(
                    "index {i} repeated or out of range in partition"
                )));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::invalid(format!("point {i} missing from partition")));
    }
    Ok(())
}

fn centroid(points: &[&[f64]]) -> Vec<f64> {
    let dim = points[0].len();
    let mut c = vec![0.0; dim];
    for p in points {
        for (ci, x) in c.iter_mut().zip(p.iter()) {
            *ci += x;
        }
    }
    let n = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= n);
    c
}

pub fn kmeans_partition_cost(
    points: &[Vec<f64>],
    partition: &[Vec<usize>],
) -> Result<PartitionCost> {
    check_partition(points.len(), partition)?;
    let mut pairwise = Vec::new();
    let mut central = Vec::new();
    for part in partition {
        let members: Vec<&[f64]> = part.iter().map(|&i| points[i].as_slice()).collect();
        let mut pair_sum = 0.0;
        for a in &members {
            for b in &members {
                pair_sum += Metric::L2.distance_pow(a, b, 2);
            }
        }
        pairwise.push(pair_sum / (2.0 * members.len() as f64));
        let c = centroid(&members);
        central.push(stable_sum(
            members
                .iter()
                .map(|p| Metric::L2.distance_pow(p, &c, 2))
                .collect(),
        ));
    }
    Ok(PartitionCost {
        pairwise: stable_sum(pairwise),
        centroid: stable_sum(central),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CenterMethod {
    Centroid,
    CoordinateMedian,
    CoordinateMode,
    Weiszfeld {
        iterations: u32,
    },
    /// Coordinate descent; the cost is an upper bound only.
    LocalSearch,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterSolution {
    pub center: Vec<f64>,
    pub cost: f64,
    pub method: CenterMethod,
    /// Certified lower bound on the optimal cost; equals `cost` for exact methods.
    pub lower_bound: f64,
}

impl CenterSolution {
    pub fn is_exact(&self) -> bool {
        self.method != CenterMethod::LocalSearch
    }
}

const WEISZFELD_CAP: u32 = 100_000;
const WEISZFELD_GRAD_TOL: f64 = 1e-8;

fn set_cost(points: &[&[f64]], c: &[f64], metric: Metric, exponent: u32) -> f64 {
    stable_sum(
        points
            .iter()
            .map(|p| metric.distance_pow(p, c, exponent))
            .collect(),
    )
}

fn column_sorted(points: &[&[f64]], j: usize) -> Vec<f64> {
    let mut col: Vec<f64> = points.iter().map(|p| p[j]).collect();
    col.sort_by(f64::total_cmp);
    col
}

/// Lower median per coordinate; on 0/1 data an exact tie resolves to 0.
fn coordinate_median(points: &[&[f64]]) -> Vec<f64> {
    (0..points[0].len())
        .map(|j| column_sorted(points, j)[(points.len() - 1) / 2])
        .collect()
}

/// Most frequent value per coordinate, ties to the smallest value.
fn coordinate_mode(points: &[&[f64]]) -> Vec<f64> {
    (0..points[0].len())
        .map(|j| {
            let col = column_sorted(points, j);
            let mut best = (0usize, col[0]);
            for (value, run) in &col.iter().chunk_by(|x| x.to_bits()) {
                let count = run.count();
                if count > best.0 {
                    best = (count, f64::from_bits(value));
                }
            }
            best.1
        })
        .collect()
}

/// Weiszfeld iteration with the Vardi–Zhang modification at data points.
fn geometric_median(points: &[&[f64]]) -> Result<(Vec<f64>, u32)> {
    let dim = points[0].len();
    let mut y = centroid(points);
    for iter in 0..WEISZFELD_CAP {
        let mut num = vec![0.0; dim];
        let mut wsum = 0.0;
        let mut resid = vec![0.0; dim];
        let mut coincident = 0usize;
        let mut nearest = (f64::INFINITY, 0usize);
        for (i, x) in points.iter().enumerate() {
            let d = Metric::L2.distance(x, &y);
            if d < nearest.0 {
                nearest = (d, i);
            }
            if d < 1e-12 {
                coincident += 1;
                continue;
            }
            for j in 0..dim {
                num[j] += x[j] / d;
                resid[j] += (x[j] - y[j]) / d;
            }
            wsum += 1.0 / d;
        }
        let rn = resid.iter().map(|r| r * r).sum::<f64>().sqrt();
        if coincident == 0 && rn <= WEISZFELD_GRAD_TOL {
            return Ok((y, iter));
        }
        if coincident > 0 && rn <= coincident as f64 + WEISZFELD_GRAD_TOL {
            return Ok((y, iter));
        }
        // Near a data point the iterates crawl; test that point directly.
        if coincident == 0 && nearest.0 < 1e-6 {
            let anchor = points[nearest.1];
            let mut r = vec![0.0; dim];
            let mut mult = 0usize;
            for x in points {
                let d = Metric::L2.distance(x, anchor);
                if d < 1e-12 {
                    mult += 1;
                    continue;
                }
                for j in 0..dim {
                    r[j] += (x[j] - anchor[j]) / d;
                }
            }
            if r.iter().map(|v| v * v).sum::<f64>().sqrt() <= mult as f64 + WEISZFELD_GRAD_TOL {
                return Ok((anchor.to_vec(), iter));
            }
        }
        if wsum == 0.0 {
            return Ok((y, iter));
        }
        let step: Vec<f64> = num.iter().map(|v| v / wsum).collect();
        if coincident == 0 {
            y = step;
        } else {
            let keep = (coincident as f64 / rn).min(1.0);
            for j in 0..dim {
                y[j] = (1.0 - keep) * step[j] + keep * y[j];
            }
        }
    }
    Err(Error::Convergence(format!(
        "Weiszfeld did not reach gradient {WEISZFELD_GRAD_TOL} in {WEISZFELD_CAP} iterations"
    )))
}

/// Exact minimizer of `Σ_i (r_i + |a_i − x|)²` over `x`.
fn l1sq_coordinate_min(rest: &[f64], col: &[f64]) -> f64 {
    let g = |x: f64| -> f64 {
        rest.iter()
            .zip(col)
            .map(|(r, a)| (r + (a - x).abs()).powi(2))
            .sum()
    };
    let mut knots: Vec<f64> = col.to_vec();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut best = (g(knots[0]), knots[0]);
    let n = col.len() as f64;
    for w in knots
        .windows(2)
        .map(|w| (w[0], w[1]))
        .chain(std::iter::once((knots[0], knots[0])))
    {
        let v = g(w.1);
        if v < best.0 {
            best = (v, w.1);
        }
        if w.0 < w.1 {
            // Stationary point of the quadratic piece on (w.0, w.1).
            let mid = 0.5 * (w.0 + w.1);
            let mut s = 0.0;
            for (r, a) in rest.iter().zip(col) {
                s += if *a > mid { r + a } else { a - r };
            }
            let x = s / n;
            if x > w.0 && x < w.1 {
                let v = g(x);
                if v < best.0 {
                    best = (v, x);
                }
            }
        }
    }
    best.1
}

fn l1sq_local_search(points: &[&[f64]], start: Vec<f64>) -> Vec<f64> {
    let dim = start.len();
    let mut c = start;
    let mut dist: Vec<f64> = points.iter().map(|p| Metric::L1.distance(p, &c)).collect();
    let mut f: f64 = dist.iter().map(|d| d * d).sum();
    for _ in 0..10_000 {
        let before = f;
        for j in 0..dim {
            let col: Vec<f64> = points.iter().map(|p| p[j]).collect();
            let rest: Vec<f64> = dist
                .iter()
                .zip(&col)
                .map(|(d, a)| d - (a - c[j]).abs())
                .collect();
            let x = l1sq_coordinate_min(&rest, &col);
            c[j] = x;
            dist = rest
                .iter()
                .zip(&col)
                .map(|(r, a)| r + (a - x).abs())
                .collect();
        }
        f = dist.iter().map(|d| d * d).sum();
        if before - f <= 1e-12 * (1.0 + f) {
            break;
        }
    }
    c
}

/// `Σ_{i<j} ‖p_i − p_j‖₁² / (2(n−1))`, from `‖p_i − p_j‖² ≤ 2(a_i² + a_j²)`.
fn l1sq_lower_bound(points: &[&[f64]]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += Metric::L1.distance(points[i], points[j]).powi(2);
        }
    }
    s / (2.0 * (n - 1) as f64)
}

/// Best single center for a point set in the continuous setting.
pub fn best_center_continuous(
    points: &[Vec<f64>],
    metric: Metric,
    exponent: u32,
) -> Result<CenterSolution> {
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    best_center_refs(&refs, metric, exponent)
}

fn best_center_refs(points: &[&[f64]], metric: Metric, exponent: u32) -> Result<CenterSolution> {
    if points.is_empty() {
        return Err(Error::invalid("no points"));
    }
    let exact = |center: Vec<f64>, method| {
        let cost = set_cost(points, &center, metric, exponent);
        CenterSolution {
            center,
            cost,
            method,
            lower_bound: cost,
        }
    };
    match (metric, exponent) {
        (Metric::L2, 2) => Ok(exact(centroid(points), CenterMethod::Centroid)),
        (Metric::L1, 1) => Ok(exact(
            coordinate_median(points),
            CenterMethod::CoordinateMedian,
        )),
        (Metric::L0, 1) => Ok(exact(coordinate_mode(points), CenterMethod::CoordinateMode)),
        (Metric::L2, 1) => {
            let (c, iterations) = geometric_median(points)?;
            Ok(exact(c, CenterMethod::Weiszfeld { iterations }))
        }
        (Metric::L1, 2) => {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for seed in [centroid(points), coordinate_median(points)] {
                let c = l1sq_local_search(points, seed);
                let cost = set_cost(points, &c, metric, 2);
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, c));
                }
            }
            let (cost, center) = best.expect("two seeds");
            Ok(CenterSolution {
                center,
                cost,
                method: CenterMethod::LocalSearch,
                lower_bound: l1sq_lower_bound(points).min(cost),
            })
        }
        (m, e) => Err(Error::unsupported(format!(
            "no continuous center routine for metric {m} with exponent {e}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptMode {
    /// Best `k`-subset of the candidate centers.
    Discrete,
    /// Best partition into at most `k` parts with free centers.
    Continuous,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimalSolution {
    pub cost: f64,
    #[serde(serialize_with = "ser_opt_bigrational")]
    pub cost_exact: Option<BigRational>,
    pub center_indices: Option<Vec<usize>>,
    pub centers: Vec<Vec<f64>>,
    pub partition: Option<Vec<Vec<usize>>>,
    /// Some part's center came from a heuristic; `cost` is then an upper bound.
    pub heuristic: bool,
    /// Certified lower bound on the optimum.
    pub lower_bound: f64,
}

/// `Σ_{j≤k} S(n,j)`: set partitions of `n` items into at most `k` parts.
pub fn partition_count(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] = row[j].saturating_mul(j as u128).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[1..].iter().fold(0u128, |a, b| a.saturating_add(*b))
}

pub fn brute_force_optimal_cost(
    ci: &ClusteringInstance,
    mode: OptMode,
    budget: u128,
) -> Result<OptimalSolution> {
    match mode {
        OptMode::Discrete => brute_discrete(ci, budget),
        OptMode::Continuous => brute_continuous(ci, budget),
    }
}

fn brute_discrete(ci: &ClusteringInstance, budget: u128) -> Result<OptimalSolution> {
    let m = ci.centers.len();
    if m == 0 {
        return Err(Error::invalid("discrete optimum needs candidate centers"));
    }
    let kk = ci.k.min(m);
    Error::check_budget("center subsets", binom(m as u64, kk as u64), budget)?;
    let e = ci.exponent;
    let table: Vec<Vec<f64>> = ci
        .points
        .par_iter()
        .map(|p| {
            ci.centers
                .iter()
                .map(|c| ci.metric.distance_pow(&p.coords, &c.coords, e))
                .collect()
        })
        .collect();
    let eval = |combo: &[usize]| -> f64 {
        table
            .iter()
            .map(|row| combo.iter().map(|&c| row[c]).fold(f64::INFINITY, f64::min))
            .sum()
    };
    let better = |a: &(f64, Vec<usize>), b: &(f64, Vec<usize>)| {
        a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)).is_lt()
    };
    let best = (0..=m - kk)
        .into_par_iter()
        .filter_map(|first| {
            let mut local: Option<(f64, Vec<usize>)> = None;
            for rest in (first + 1..m).combinations(kk - 1) {
                let mut combo = Vec::with_capacity(kk);
                combo.push(first);
                combo.extend(rest);
                let cand = (eval(&combo), combo);
                if local.as_ref().is_none_or(|l| better(&cand, l)) {
                    local = Some(cand);
                }
            }
            local
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one subset");
    let centers = ci.center_vectors(&best.1)?;
    let cost = clustering_cost(ci, &centers)?;
    Ok(OptimalSolution {
        cost: cost.total,
        cost_exact: cost.total_exact,
        center_indices: Some(best.1),
        centers,
        partition: None,
        heuristic: false,
        lower_bound: cost.total,
    })
}

fn brute_continuous(ci: &ClusteringInstance, budget: u128) -> Result<OptimalSolution> {
    let n = ci.points.len();
    if n == 0 {
        return Err(Error::invalid("no points"));
    }
    if n > 20 {
        return Err(Error::unsupported(format!(
            "partition enumeration supports at most 20 points, got {n}"
        )));
    }
    let k = ci.k.min(n);
    Error::check_budget("point partitions", partition_count(n, k), budget)?;
    let points: Vec<&[f64]> = ci.points.iter().map(|p| p.coords.as_slice()).collect();
    let mut memo: HashMap<u32, CenterSolution> = HashMap::new();
    let mut solve = |mask: u32| -> Result<CenterSolution> {
        if let Some(s) = memo.get(&mask) {
            return Ok(s.clone());
        }
        let members: Vec<&[f64]> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| points[i])
            .collect();
        let s = best_center_refs(&members, ci.metric, ci.exponent)?;
        memo.insert(mask, s.clone());
        Ok(s)
    };

    // Restricted growth strings: labels[i] <= max(labels[..i]) + 1 < k.
    let mut labels = vec![0usize; n];
    let mut best: Option<(f64, Vec<u32>)> = None;
    let mut best_lower = f64::INFINITY;
    loop {
        let parts = labels.iter().max().map_or(0, |m| m + 1);
        let mut masks = vec![0u32; parts];
        for (i, &l) in labels.iter().enumerate() {
            masks[l] |= 1 << i;
        }
        let mut cost = 0.0;
        let mut lower = 0.0;
        for &mask in &masks {
            let s = solve(mask)?;
            cost += s.cost;
            lower += s.lower_bound;
        }
        best_lower = best_lower.min(lower);
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, masks));
        }
        // Advance to the next restricted growth string.
        let mut i = n;
        loop {
            if i == 1 {
                let (cost, masks) = best.expect("at least one partition");
                let parts: Vec<Vec<usize>> = masks
                    .iter()
                    .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                    .collect();
                let sols = masks
                    .iter()
                    .map(|&m| solve(m))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(OptimalSolution {
                    cost,
                    cost_exact: None,
                    center_indices: None,
                    heuristic: sols.iter().any(|s| !s.is_exact()),
                    centers: sols.into_iter().map(|s| s.center).collect(),
                    partition: Some(parts),
                    lower_bound: best_lower.min(cost),
                });
            }
            i -= 1;
            let prefix_max = labels[..i].iter().copied().max().unwrap_or(0);
            if labels[i] < prefix_max + 1 && labels[i] + 1 < k {
                labels[i] += 1;
                labels[i + 1..].iter_mut().for_each(|l| *l = 0);
                break;
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    /// Certified bracket on the minimum enclosing ball radius.
    pub radius_lower: f64,
    pub radius_upper: f64,
    pub threshold: f64,
    pub holds: bool,
    pub iterations: u32,
}

/// Minimum enclosing ball by Frank–Wolfe with away steps on the dual
/// `max_λ Σ λ_i‖p_i‖² − ‖Σ λ_i p_i‖²` over the simplex.
///
/// Any dual point gives `√value ≤ r*`, and any center gives
/// `max_i ‖p_i − c‖ ≥ r*`, so the returned bracket always contains the radius.
pub fn min_enclosing_ball(
    points: &[Vec<f64>],
    tol: f64,
    max_iter: u32,
) -> Result<(Vec<f64>, f64, f64, u32)> {
    let n = points.len();
    if n == 0 {
        return Err(Error::invalid("no points"));
    }
    let dim = points[0].len();
    let norms: Vec<f64> = points
        .iter()
        .map(|p| p.iter().map(|x| x * x).sum())
        .collect();
    let mut lam = vec![1.0 / n as f64; n];
    let mut center = vec![0.0; dim];
    let mut iters = 0;
    let (mut lower, mut upper);
    loop {
        center.iter_mut().for_each(|c| *c = 0.0);
        for (l, p) in lam.iter().zip(points) {
            for (c, x) in center.iter_mut().zip(p) {
                *c += l * x;
            }
        }
        let c2: f64 = center.iter().map(|x| x * x).sum();
        let dual: f64 = lam.iter().zip(&norms).map(|(l, n)| l * n).sum::<f64>() - c2;
        let d2: Vec<f64> = points
            .iter()
            .map(|p| Metric::L2.distance_pow(p, &center, 2))
            .collect();
        let far = (0..n)
            .max_by(|&a, &b| d2[a].total_cmp(&d2[b]).then(b.cmp(&a)))
            .expect("non-empty");
        lower = dual.max(0.0).sqrt();
        upper = d2[far].sqrt();
        if upper - lower <= tol || iters >= max_iter {
            break;
        }
        iters += 1;
        // Gradient of the dual is d2 − ‖c‖²; compare toward and away gaps.
        let near = (0..n)
            .filter(|&i| lam[i] > 0.0)
            .min_by(|&a, &b| d2[a].total_cmp(&d2[b]).then(a.cmp(&b)))
            .expect("support non-empty");
        let dual_gap_fw = d2[far] - lam.iter().zip(&d2).map(|(l, d)| l * d).sum::<f64>();
        let dual_gap_away = lam.iter().zip(&d2).map(|(l, d)| l * d).sum::<f64>() - d2[near];
        let (dir, max_step): (Vec<f64>, f64) = if dual_gap_fw >= dual_gap_away {
            let mut d: Vec<f64> = lam.iter().map(|l| -l).collect();
            d[far] += 1.0;
            (d, 1.0)
        } else {
            let mut d = lam.clone();
            d[near] -= 1.0;
            let cap = if lam[near] < 1.0 {
                lam[near] / (1.0 - lam[near])
            } else {
                f64::INFINITY
            };
            (d, cap)
        };
        // Dual along dir: value + τ·g·dir − τ²‖Σ dir_i p_i‖².
        let mut moved = vec![0.0; dim];
        for (di, p) in dir.iter().zip(points) {
            if *di != 0.0 {
                for (m, x) in moved.iter_mut().zip(p) {
                    *m += di * x;
                }
            }
        }
        let curv: f64 = moved.iter().map(|x| x * x).sum();
        let slope: f64 = dir.iter().zip(&d2).map(|(d, g)| d * (g - c2)).sum();
        if curv <= 0.0 || slope <= 0.0 {
            break;
        }
        let step = (slope / (2.0 * curv)).min(max_step);
        for (l, d) in lam.iter_mut().zip(&dir) {
            *l = (*l + step * d).max(0.0);
        }
    }
    Ok((center, lower, upper, iters))
}

/// Checks that any center sits at distance `>= 1 − eps` from some point of
/// a set with pairwise distances `>= √2`.
pub fn separation_center_bound_check(points: &[Vec<f64>], eps: f64) -> Result<SeparationReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    let n = points.len();
    if (n as f64) <= 4.0 / eps + 1.0 {
        return Err(Error::invalid(format!(
            "need more than 4/eps + 1 = {} points, got {n}",
            4.0 / eps + 1.0
        )));
    }
    let min_sep = 2f64.sqrt() - FLOAT_TOL;
    for i in 0..n {
        for j in i + 1..n {
            if Metric::L2.distance(&points[i], &points[j]) < min_sep {
                return Err(Error::invalid(format!(
                    "points {i} and {j} are closer than √2"
                )));
            }
        }
    }
    let (_, lower, upper, iterations) = min_enclosing_ball(points, 1e-6, 1_000_000)?;
    let threshold = 1.0 - eps;
    Ok(SeparationReport {
        radius_lower: lower,
        radius_upper: upper,
        threshold,
        holds: lower >= threshold,
        iterations,
    })
}
