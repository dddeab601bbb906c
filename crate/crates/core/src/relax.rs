//! The 4-clique clustering instance on `K_n` and its relaxation gap.
//!
//! Points are the 4-cliques, candidate centers the edges, and a center
//! serves a point at ℓ1 distance 2 exactly when the edge lies in the clique.
//! An explicit vector solution of the SDP relaxation pays 2 per point; any
//! integral choice of about `C(n,2)/5` edges leaves a constant fraction of
//! cliques at distance at least 4.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factors::turan_random_uncovered;
use crate::report::{big, ratio, ser_bigrational, ser_opt_bigrational};
use crate::subset::{all_subsets, binom, Subset};

/// Budget parameter of the explicit vector solution.
pub const DEFAULT_T: u32 = 5;

#[derive(Clone, Debug, Serialize)]
pub struct CliqueGapInstance {
    pub n: u32,
    /// All 4-subsets of `{1,…,n}`, lexicographic.
    pub cliques: Vec<Subset>,
    /// All 2-subsets, lexicographic.
    pub edges: Vec<Subset>,
    /// `⌊C(n,2)/5⌋`.
    pub k: u64,
    /// `clique_edges[p]`: indices of the six edges inside clique `p`.
    pub clique_edges: Vec<[usize; 6]>,
}

pub fn build_clique_gap_instance(n: u32) -> Result<CliqueGapInstance> {
    if n < 5 {
        return Err(Error::invalid(format!(
            "clique gap instance needs n >= 5, got {n}"
        )));
    }
    if n > 16 {
        return Err(Error::unsupported(format!(
            "edge masks hold at most C(16,2) = 120 edges, got n={n}"
        )));
    }
    let cliques = all_subsets(1, n, 4);
    let edges = all_subsets(1, n, 2);
    let clique_edges = cliques
        .iter()
        .map(|p| {
            let idx: Vec<usize> = p
                .elems()
                .iter()
                .copied()
                .combinations(2)
                .map(|e| {
                    edges
                        .binary_search(&Subset::from_sorted(e))
                        .expect("edge listed")
                })
                .collect();
            idx.try_into().expect("six edges")
        })
        .collect();
    Ok(CliqueGapInstance {
        n,
        k: (binom(n as u64, 2) / DEFAULT_T as u128) as u64,
        cliques,
        edges,
        clique_edges,
    })
}

impl CliqueGapInstance {
    pub fn point_vector(&self, p: usize) -> Vec<f64> {
        indicator(self.n, &self.cliques[p])
    }

    pub fn center_vector(&self, e: usize) -> Vec<f64> {
        indicator(self.n, &self.edges[e])
    }

    /// Number of centers covering each point (always 6).
    pub fn covering_counts(&self) -> Vec<usize> {
        self.cliques
            .iter()
            .map(|p| self.edges.iter().filter(|e| e.is_subset_of(p)).count())
            .collect()
    }

    fn clique_masks(&self) -> Vec<u128> {
        self.clique_edges
            .iter()
            .map(|es| es.iter().fold(0u128, |m, &e| m | 1 << e))
            .collect()
    }
}

fn indicator(n: u32, s: &Subset) -> Vec<f64> {
    let mut v = vec![0.0; n as usize];
    for &e in s.elems() {
        v[e as usize - 1] = 1.0;
    }
    v
}

/// Sparse vector over the basis `v0, w_1…w_E, w'_1…w'_E`.
pub type SparseVec = Vec<(usize, f64)>;

fn dot(a: &SparseVec, b: &SparseVec) -> f64 {
    let mut s = 0.0;
    for (i, x) in a {
        for (j, y) in b {
            if i == j {
                s += x * y;
            }
        }
    }
    s
}

fn add_into(acc: &mut [f64], v: &SparseVec) {
    for (i, x) in v {
        acc[*i] += x;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SdpSolution {
    pub t: u32,
    pub dim: usize,
    /// One vector per edge.
    pub centers: Vec<SparseVec>,
    /// `point_center[p][a]` pairs clique `p` with its `a`-th inner edge;
    /// vectors for non-incident pairs are zero and not stored.
    pub point_center: Vec<[SparseVec; 6]>,
    pub edges: usize,
    pub clique_edges: Vec<[usize; 6]>,
    /// `C(n,2)/t`, the fractional budget the center norms add up to.
    #[serde(serialize_with = "ser_bigrational")]
    pub fractional_k: BigRational,
    pub k: u64,
}

/// Center and point-center vectors in an orthonormal basis: index 0 is
/// `v0`, `1+e` is `w_e`, `1+E+e` is `w'_e`.
pub fn build_sdp_solution(inst: &CliqueGapInstance, t: u32) -> Result<SdpSolution> {
    if t < 2 {
        return Err(Error::invalid(format!("t must be >= 2, got {t}")));
    }
    let e_count = inst.edges.len();
    let tf = t as f64;
    let w_coef = (tf - 1.0) * (tf + 1.0).sqrt() / (tf * tf);
    let wp_coef = (tf - 1.0).sqrt() / (tf * tf);
    let centers = (0..e_count)
        .map(|e| vec![(0, 1.0 / tf), (1 + e, w_coef), (1 + e_count + e, wp_coef)])
        .collect();
    let scale = (tf + 1.0).powf(1.5);
    let point_center = inst
        .clique_edges
        .iter()
        .map(|es| {
            std::array::from_fn(|a| {
                let mut v = vec![(0, 1.0 / (tf + 1.0)), (1 + es[a], tf / scale)];
                v.extend(
                    es.iter()
                        .filter(|&&f| f != es[a])
                        .map(|&f| (1 + f, -1.0 / scale)),
                );
                v
            })
        })
        .collect();
    Ok(SdpSolution {
        t,
        dim: 1 + 2 * e_count,
        centers,
        point_center,
        edges: e_count,
        clique_edges: inst.clique_edges.clone(),
        fractional_k: ratio(e_count as i64, t as i64),
        k: inst.k,
    })
}

impl SdpSolution {
    /// Adds `amount` to the `v0` coordinate of one center vector.
    pub fn perturb_center(&mut self, e: usize, amount: f64) {
        self.centers[e][0].1 += amount;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintResidual {
    pub family: &'static str,
    pub residual: f64,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SdpCheck {
    pub families: Vec<ConstraintResidual>,
    pub max_residual: f64,
    /// `Σ_e ‖u_e‖²`.
    pub center_mass: f64,
    /// `Σ_{p,e} |p △ e|·‖v_{p,e}‖²`.
    pub objective: f64,
    #[serde(serialize_with = "ser_bigrational")]
    pub objective_exact: BigRational,
}

/// Constraint family names, in reporting order.
pub const FAMILIES: [&str; 6] = [
    "v0-norm",
    "point-consistency",
    "center-consistency",
    "point-center",
    "assignment",
    "budget",
];

fn worst(family: &'static str, it: impl Iterator<Item = (f64, String)>) -> ConstraintResidual {
    let (residual, witness) = it.fold((0.0, String::new()), |best, cur| {
        if cur.0 > best.0 {
            cur
        } else {
            best
        }
    });
    ConstraintResidual {
        family,
        residual,
        witness,
    }
}

/// Evaluates every constraint family and returns the check, or a
/// certification failure naming the worst family when it exceeds `tol`.
pub fn verify_sdp_solution(sol: &SdpSolution, tol: f64) -> Result<SdpCheck> {
    let v0: SparseVec = vec![(0, 1.0)];
    let mut families = vec![worst(
        FAMILIES[0],
        std::iter::once(((dot(&v0, &v0) - 1.0).abs(), "v0".into())),
    )];
    let per_point: Vec<[(f64, String); 3]> = sol
        .point_center
        .par_iter()
        .enumerate()
        .map(|(p, vs)| {
            let mut cons = (0.0, String::new());
            let mut cross = (0.0, String::new());
            let mut sum = vec![0.0; sol.dim];
            for (a, v) in vs.iter().enumerate() {
                let e = sol.clique_edges[p][a];
                let n2 = dot(v, v);
                let r = (dot(v, &v0) - n2).abs();
                if r > cons.0 {
                    cons = (r, format!("point {p} edge {e}"));
                }
                let r = (dot(v, &sol.centers[e]) - n2).abs();
                if r > cross.0 {
                    cross = (r, format!("point {p} edge {e}"));
                }
                add_into(&mut sum, v);
            }
            sum[0] -= 1.0;
            let r = sum.iter().map(|x| x * x).sum::<f64>();
            [cons, cross, (r, format!("point {p}"))]
        })
        .collect();
    families.push(worst(FAMILIES[1], per_point.iter().map(|r| r[0].clone())));
    families.push(worst(
        FAMILIES[2],
        sol.centers
            .iter()
            .enumerate()
            .map(|(e, u)| ((dot(u, &v0) - dot(u, u)).abs(), format!("edge {e}"))),
    ));
    families.push(worst(FAMILIES[3], per_point.iter().map(|r| r[1].clone())));
    families.push(worst(FAMILIES[4], per_point.iter().map(|r| r[2].clone())));
    let center_mass: f64 = sol.centers.iter().map(|u| dot(u, u)).sum();
    let k = crate::report::to_f64(&sol.fractional_k);
    families.push(worst(
        FAMILIES[5],
        std::iter::once((
            (center_mass - k).max(0.0),
            format!("mass {center_mass} vs {k}"),
        )),
    ));

    // Every stored pair is an edge inside a clique: ℓ1 distance 2.
    let objective: f64 = sol
        .point_center
        .iter()
        .flat_map(|vs| vs.iter().map(|v| 2.0 * dot(v, v)))
        .sum();
    let tb = BigRational::from_integer(BigInt::from(sol.t));
    let one = BigRational::one();
    // ‖v_{p,e}‖² = 1/(t+1)² + (t² + 5)/(t+1)³, exactly.
    let tp1 = &tb + &one;
    let norm2 = &one / (&tp1 * &tp1) + (&tb * &tb + big(5)) / (&tp1 * &tp1 * &tp1);
    let objective_exact = big(2) * big(6) * big(sol.point_center.len() as u128) * norm2;

    let max = families
        .iter()
        .max_by(|a, b| a.residual.total_cmp(&b.residual))
        .expect("six families");
    let max_residual = max.residual;
    if max_residual > tol {
        return Err(Error::Certification {
            reason: format!("{} residual {max_residual:e} exceeds {tol:e}", max.family),
            witness: max.witness.clone(),
        });
    }
    Ok(SdpCheck {
        families,
        max_residual,
        center_mass,
        objective,
        objective_exact,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LpCheck {
    #[serde(serialize_with = "ser_bigrational")]
    pub center_total: BigRational,
    #[serde(serialize_with = "ser_bigrational")]
    pub objective: BigRational,
    /// Largest violation over assignment, capacity and budget constraints.
    #[serde(serialize_with = "ser_bigrational")]
    pub residual: BigRational,
}

/// The LP point opening every edge to 1/6 and serving each clique 1/6 from
/// each of its edges.
pub fn lp_fractional_value(inst: &CliqueGapInstance) -> LpCheck {
    let sixth = ratio(1, 6);
    let y = vec![sixth.clone(); inst.edges.len()];
    let mut residual = BigRational::zero();
    let mut objective = BigRational::zero();
    for es in &inst.clique_edges {
        let served = es.iter().fold(BigRational::zero(), |s, _| s + &sixth);
        residual = residual.max((served - BigRational::one()).abs());
        for &e in es {
            residual = residual.max((&sixth - &y[e]).max(BigRational::zero()));
            objective += big(2) * &sixth;
        }
    }
    let center_total = y.iter().fold(BigRational::zero(), |s, v| s + v);
    residual = residual.max((&center_total - big(inst.k as u128)).max(BigRational::zero()));
    LpCheck {
        center_total,
        objective,
        residual,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SearchMode {
    /// Enumerates every `k′`-subset of edges, if within `budget`.
    Exact { budget: u128 },
    /// Seeded swap local search; the result is an upper bound.
    Heuristic { seed: u64, restarts: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralResult {
    pub k_prime: u64,
    pub uncovered: u64,
    pub witness: Vec<Subset>,
    pub exact: bool,
}

fn uncovered_count(masks: &[u128], chosen: u128) -> u64 {
    masks.iter().filter(|m| *m & chosen == 0).count() as u64
}

/// Fewest cliques containing none of `k′` chosen edges.
pub fn integral_min_uncovered(
    inst: &CliqueGapInstance,
    k_prime: u64,
    mode: SearchMode,
) -> Result<IntegralResult> {
    let m = inst.edges.len();
    let kk = (k_prime as usize).min(m);
    let masks = inst.clique_masks();
    let witness_of = |idx: &[usize]| idx.iter().map(|&e| inst.edges[e].clone()).collect();
    if kk == 0 {
        return Ok(IntegralResult {
            k_prime,
            uncovered: masks.len() as u64,
            witness: Vec::new(),
            exact: true,
        });
    }
    match mode {
        SearchMode::Exact { budget } => {
            Error::check_budget("edge subsets", binom(m as u64, kk as u64), budget)?;
            let best = (0..=m - kk)
                .into_par_iter()
                .map(|first| {
                    let mut local: (u64, Vec<usize>) = (u64::MAX, Vec::new());
                    for rest in (first + 1..m).combinations(kk - 1) {
                        let mask = rest.iter().fold(1u128 << first, |a, &e| a | 1 << e);
                        let u = uncovered_count(&masks, mask);
                        if u < local.0 {
                            let mut idx = vec![first];
                            idx.extend(rest);
                            local = (u, idx);
                            if u == 0 {
                                break;
                            }
                        }
                    }
                    local
                })
                .reduce(
                    || (u64::MAX, Vec::new()),
                    |a, b| if (b.0, &b.1) < (a.0, &a.1) { b } else { a },
                );
            Ok(IntegralResult {
                k_prime,
                uncovered: best.0,
                witness: witness_of(&best.1),
                exact: true,
            })
        }
        SearchMode::Heuristic { seed, restarts } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best: (u64, Vec<usize>) = (u64::MAX, Vec::new());
            for _ in 0..restarts.max(1) {
                let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, m, kk).into_vec();
                chosen.sort_unstable();
                let mut mask = chosen.iter().fold(0u128, |a, &e| a | 1 << e);
                let mut cur = uncovered_count(&masks, mask);
                'improve: loop {
                    for slot in chosen.iter_mut() {
                        for cand in 0..m {
                            if mask >> cand & 1 == 1 {
                                continue;
                            }
                            let next = (mask & !(1 << *slot)) | 1 << cand;
                            let u = uncovered_count(&masks, next);
                            if u < cur {
                                *slot = cand;
                                mask = next;
                                cur = u;
                                continue 'improve;
                            }
                        }
                    }
                    break;
                }
                chosen.sort_unstable();
                if (cur, &chosen) < (best.0, &best.1) {
                    best = (cur, chosen);
                }
            }
            Ok(IntegralResult {
                k_prime,
                uncovered: best.0,
                witness: witness_of(&best.1),
                exact: false,
            })
        }
    }
}

/// All pairwise ℓ1 distances among points and centers are at least 2.
pub fn well_separated(inst: &CliqueGapInstance) -> bool {
    let all: Vec<&Subset> = inst.cliques.iter().chain(&inst.edges).collect();
    all.iter().enumerate().all(|(i, a)| {
        all[i + 1..]
            .iter()
            .all(|b| a.len() + b.len() - 2 * a.intersection_len(b) >= 2)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralRow {
    pub extra_fraction: f64,
    pub k_prime: u64,
    pub uncovered: u64,
    /// `2·covered + 4·uncovered`, a lower bound on the integral cost.
    pub integral_cost_lower: u64,
    #[serde(serialize_with = "ser_bigrational")]
    pub gap: BigRational,
    /// Uncovered count predicted by the asymptotic density bound.
    pub predicted_uncovered: f64,
    /// The exact count fell below the asymptotic prediction.
    pub finite_size_deviation: bool,
    pub provenance: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub n: u32,
    pub t: u32,
    pub points: usize,
    pub centers: usize,
    pub k: u64,
    #[serde(serialize_with = "ser_bigrational")]
    pub fractional_k: BigRational,
    pub sdp_max_residual: f64,
    #[serde(serialize_with = "ser_bigrational")]
    pub sdp_objective: BigRational,
    #[serde(serialize_with = "ser_bigrational")]
    pub lp_objective: BigRational,
    #[serde(serialize_with = "ser_bigrational")]
    pub lp_residual: BigRational,
    pub integral: Vec<IntegralRow>,
    pub sdp_provenance: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    /// `t(t−1)(t−2)(t−3)/t⁴`, the limiting uncovered fraction.
    #[serde(serialize_with = "ser_bigrational")]
    pub density_fraction: BigRational,
    /// `1 + density_fraction`.
    #[serde(serialize_with = "ser_bigrational")]
    pub asymptotic_gap: BigRational,
    #[serde(serialize_with = "ser_opt_bigrational")]
    pub random_cover_fraction: Option<BigRational>,
    pub rows: Vec<GapRow>,
}

#[derive(Clone, Debug)]
pub struct GapOptions {
    pub t: u32,
    pub tol: f64,
    pub budget: u128,
    /// Sweep `k′ = ⌊k(1+δ)⌋` for `δ ∈ {0, 0.1, 0.2}` instead of `δ = 0` only.
    pub extra_centers: bool,
    /// Fall back to local search when exact enumeration exceeds the budget.
    pub heuristic: bool,
    pub seed: u64,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            t: DEFAULT_T,
            tol: 1e-8,
            budget: 50_000_000,
            extra_centers: false,
            heuristic: true,
            seed: 0,
        }
    }
}

/// `t(t−1)(t−2)(t−3)/t⁴`.
pub fn density_fraction(t: u32) -> BigRational {
    let t = t as i64;
    ratio(t * (t - 1) * (t - 2) * (t - 3), t * t * t * t)
}

pub fn gap_report(n_list: &[u32], opts: &GapOptions) -> Result<GapReport> {
    let frac = density_fraction(opts.t);
    let mut rows = Vec::new();
    for &n in n_list {
        let inst = build_clique_gap_instance(n)?;
        let sol = build_sdp_solution(&inst, opts.t)?;
        let check = verify_sdp_solution(&sol, opts.tol)?;
        let lp = lp_fractional_value(&inst);
        let points = inst.cliques.len();
        let sweep: &[f64] = if opts.extra_centers {
            &[0.0, 0.1, 0.2]
        } else {
            &[0.0]
        };
        let mut integral = Vec::new();
        for &d in sweep {
            let k_prime = (inst.k as f64 * (1.0 + d)).floor() as u64;
            let exact = integral_min_uncovered(
                &inst,
                k_prime,
                SearchMode::Exact {
                    budget: opts.budget,
                },
            );
            let res = match exact {
                Ok(r) => r,
                Err(Error::Budget { .. }) if opts.heuristic => integral_min_uncovered(
                    &inst,
                    k_prime,
                    SearchMode::Heuristic {
                        seed: opts.seed,
                        restarts: 20,
                    },
                )?,
                Err(e) => return Err(e),
            };
            let cost = 2 * points as u64 + 2 * res.uncovered;
            let predicted = crate::report::to_f64(&frac) * points as f64;
            integral.push(IntegralRow {
                extra_fraction: d,
                k_prime,
                uncovered: res.uncovered,
                integral_cost_lower: cost,
                gap: big(cost as u128) / &check.objective_exact,
                predicted_uncovered: predicted,
                finite_size_deviation: (res.uncovered as f64) < predicted,
                provenance: if res.exact {
                    "brute-force"
                } else {
                    "heuristic"
                },
            });
        }
        rows.push(GapRow {
            n,
            t: opts.t,
            points,
            centers: inst.edges.len(),
            k: inst.k,
            fractional_k: sol.fractional_k.clone(),
            sdp_max_residual: check.max_residual,
            sdp_objective: check.objective_exact,
            lp_objective: lp.objective,
            lp_residual: lp.residual,
            integral,
            sdp_provenance: "verified-construction",
        });
    }
    Ok(GapReport {
        asymptotic_gap: BigRational::one() + &frac,
        density_fraction: frac,
        random_cover_fraction: turan_random_uncovered(4).ok(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_shapes() {
        let i = build_clique_gap_instance(5).unwrap();
        assert_eq!((i.cliques.len(), i.edges.len(), i.k), (5, 10, 2));
        let i = build_clique_gap_instance(6).unwrap();
        assert_eq!((i.cliques.len(), i.edges.len(), i.k), (15, 15, 3));
        assert!(i.covering_counts().iter().all(|&c| c == 6));
        assert!(build_clique_gap_instance(4).is_err());
        // Covering iff ℓ1 distance 2.
        for p in 0..i.cliques.len() {
            for e in 0..i.edges.len() {
                let d: f64 = i
                    .point_vector(p)
                    .iter()
                    .zip(i.center_vector(e))
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                assert_eq!(d == 2.0, i.edges[e].is_subset_of(&i.cliques[p]));
            }
        }
    }

    #[test]
    fn sdp_norms() {
        let inst = build_clique_gap_instance(6).unwrap();
        let sol = build_sdp_solution(&inst, 5).unwrap();
        for u in &sol.centers {
            assert!((dot(u, u) - 0.2).abs() < 1e-15);
        }
        for vs in &sol.point_center {
            let mut sum = vec![0.0; sol.dim];
            for v in vs {
                assert!((dot(v, v) - 1.0 / 6.0).abs() < 1e-15);
                add_into(&mut sum, v);
            }
            assert!((sum[0] - 1.0).abs() < 1e-15);
            assert!(sum[1..].iter().all(|x| x.abs() < 1e-15));
        }
    }

    #[test]
    fn sdp_verifies() {
        for n in 5..=10 {
            let inst = build_clique_gap_instance(n).unwrap();
            let sol = build_sdp_solution(&inst, 5).unwrap();
            let check = verify_sdp_solution(&sol, 1e-8).unwrap();
            assert!(check.max_residual <= 1e-12, "n={n}");
            let target = 2 * binom(n as u64, 4);
            assert_eq!(check.objective_exact, big(target));
            assert!((check.objective - target as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn perturbation_is_caught() {
        let inst = build_clique_gap_instance(6).unwrap();
        let mut sol = build_sdp_solution(&inst, 5).unwrap();
        sol.perturb_center(3, 1e-3);
        match verify_sdp_solution(&sol, 1e-8) {
            Err(Error::Certification { reason, .. }) => {
                assert!(reason.starts_with("center-consistency"))
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn other_t_fails_assignment() {
        let inst = build_clique_gap_instance(6).unwrap();
        let sol = build_sdp_solution(&inst, 4).unwrap();
        assert!(verify_sdp_solution(&sol, 1e-8).is_err());
    }

    #[test]
    fn lp_values() {
        let lp = lp_fractional_value(&build_clique_gap_instance(6).unwrap());
        assert_eq!(lp.center_total, ratio(5, 2));
        assert_eq!(lp.objective, big(30));
        assert!(lp.residual.is_zero());
        let lp = lp_fractional_value(&build_clique_gap_instance(5).unwrap());
        assert_eq!(lp.objective, big(10));
    }

    fn oracle_min_uncovered(inst: &CliqueGapInstance, kk: usize) -> u64 {
        (0..inst.edges.len())
            .combinations(kk)
            .map(|c| {
                inst.cliques
                    .iter()
                    .filter(|p| c.iter().all(|&e| !inst.edges[e].is_subset_of(p)))
                    .count() as u64
            })
            .min()
            .unwrap()
    }

    #[test]
    fn integral_examples() {
        let budget = SearchMode::Exact { budget: 1 << 30 };
        let i6 = build_clique_gap_instance(6).unwrap();
        let r = integral_min_uncovered(&i6, 3, budget).unwrap();
        assert_eq!(r.uncovered, 0);
        assert_eq!(r.witness.len(), 3);
        let i5 = build_clique_gap_instance(5).unwrap();
        let r = integral_min_uncovered(&i5, 2, budget).unwrap();
        assert_eq!(r.uncovered, oracle_min_uncovered(&i5, 2));
        assert_eq!(
            integral_min_uncovered(&i5, 10, budget).unwrap().uncovered,
            0
        );
        assert!(matches!(
            integral_min_uncovered(&i6, 3, SearchMode::Exact { budget: 10 }),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn integral_monotone_in_budget() {
        let i = build_clique_gap_instance(6).unwrap();
        let mut prev = u64::MAX;
        for kp in 0..=5 {
            let u = integral_min_uncovered(&i, kp, SearchMode::Exact { budget: 1 << 30 })
                .unwrap()
                .uncovered;
            assert!(u <= prev);
            assert_eq!(
                u,
                if kp == 0 {
                    15
                } else {
                    oracle_min_uncovered(&i, kp as usize)
                }
            );
            prev = u;
        }
    }

    #[test]
    fn heuristic_is_an_upper_bound() {
        let i = build_clique_gap_instance(7).unwrap();
        let exact = integral_min_uncovered(&i, 4, SearchMode::Exact { budget: 1 << 30 }).unwrap();
        let h = integral_min_uncovered(
            &i,
            4,
            SearchMode::Heuristic {
                seed: 1,
                restarts: 5,
            },
        )
        .unwrap();
        assert!(!h.exact && h.uncovered >= exact.uncovered);
    }

    #[test]
    fn separation() {
        for n in 5..=8 {
            assert!(well_separated(&build_clique_gap_instance(n).unwrap()));
        }
    }

    #[test]
    fn report_constants() {
        assert_eq!(density_fraction(5), ratio(24, 125));
        let r = gap_report(&[6], &GapOptions::default()).unwrap();
        assert_eq!(r.asymptotic_gap, ratio(149, 125));
        let row = &r.rows[0].integral[0];
        assert_eq!(row.uncovered, 0);
        assert!(row.finite_size_deviation);
        assert!(row.gap.is_one());
    }
}
