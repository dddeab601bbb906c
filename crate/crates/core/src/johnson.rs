//! Johnson Coverage instances: z-uniform hyperedges over `[n]` that are
//! covered by choosing `k` subsets of size `y`.
//!
//! A `y`-set `S` covers a hyperedge `T` when `S ⊂ T`. The exact solvers here
//! are the oracles the rest of the crate is checked against: an exhaustive
//! search over all `k`-collections of `y`-sets and, for `y = z − 1`, a
//! bounded-depth branching decision procedure whose tree has at most `z^k`
//! leaves.

use num_rational::Ratio;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::subset::{all_subsets, binom, unrank_subset, Subset};

/// A Johnson Coverage instance over the universe `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JohnsonInstance {
    n: u32,
    z: u32,
    y: u32,
    k: u32,
    edges: Vec<Subset>,
}

impl JohnsonInstance {
    /// Validates parameters and edges; edges are sorted, duplicates rejected.
    pub fn new(n: u32, z: u32, y: u32, k: u32, mut edges: Vec<Subset>) -> Result<Self> {
        if !(1 <= y && y < z && z <= n) {
            return Err(Error::invalid(format!(
                "need 1 <= y < z <= n, got n={n} z={z} y={y}"
            )));
        }
        for e in &edges {
            e.check_shape(z as usize, 1, n)?;
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {}", w[0])));
        }
        Ok(JohnsonInstance { n, z, y, k, edges })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn z(&self) -> u32 {
        self.z
    }
    pub fn y(&self) -> u32 {
        self.y
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn edges(&self) -> &[Subset] {
        &self.edges
    }

    pub fn with_budget(&self, k: u32) -> Self {
        JohnsonInstance { k, ..self.clone() }
    }

    /// `|E| / (k · n^{z−y−1})`; values growing with `n` mark the dense regime
    /// the continuous reductions assume. No hardness is implied.
    pub fn density_ratio(&self) -> f64 {
        let scale = (self.k.max(1) as f64) * (self.n as f64).powi((self.z - self.y - 1) as i32);
        self.edges.len() as f64 / scale
    }

    fn check_cover_set(&self, s: &Subset) -> Result<()> {
        s.check_shape(self.y as usize, 1, self.n)
    }
}

/// A collection of distinct `y`-subsets, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CoverCollection(Vec<Subset>);

impl CoverCollection {
    pub fn new(mut sets: Vec<Subset>) -> Result<Self> {
        sets.sort();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate cover set {}", w[0])));
        }
        Ok(CoverCollection(sets))
    }

    pub fn sets(&self) -> &[Subset] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Covered-edge count with the exact covered fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub covered: u64,
    pub total: u64,
    #[serde(serialize_with = "crate::report::ser_ratio_u64")]
    pub fraction: Ratio<u64>,
}

impl CoverageReport {
    fn new(covered: u64, total: u64) -> Self {
        // An empty edge set is vacuously fully covered.
        let fraction = if total == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(covered, total)
        };
        CoverageReport {
            covered,
            total,
            fraction,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.total
    }
}

/// The edges of `inst` that contain `s`, in sorted order.
pub fn cov(s: &Subset, inst: &JohnsonInstance) -> Result<Vec<Subset>> {
    inst.check_cover_set(s)?;
    Ok(inst
        .edges
        .iter()
        .filter(|t| s.is_subset_of(t))
        .cloned()
        .collect())
}

/// Counts the edges covered by the union of `cov(S)` over `S ∈ collection`.
pub fn coverage_fraction(
    collection: &CoverCollection,
    inst: &JohnsonInstance,
) -> Result<CoverageReport> {
    if collection.len() > inst.k as usize {
        return Err(Error::invalid(format!(
            "collection has {} sets but the budget is k={}",
            collection.len(),
            inst.k
        )));
    }
    for s in collection.sets() {
        inst.check_cover_set(s)?;
    }
    let covered = inst
        .edges
        .iter()
        .filter(|t| collection.sets().iter().any(|s| s.is_subset_of(t)))
        .count() as u64;
    Ok(CoverageReport::new(covered, inst.edges.len() as u64))
}

/// Fixed-width bitset over edge indices.
#[derive(Clone, Debug)]
struct EdgeMask(Vec<u64>);

impl EdgeMask {
    fn zeros(bits: usize) -> Self {
        EdgeMask(vec![0; bits.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn or_into(&self, other: &EdgeMask, out: &mut EdgeMask) {
        for ((o, a), b) in out.0.iter_mut().zip(&self.0).zip(&other.0) {
            *o = a | b;
        }
    }
    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Exhaustive maximiser over all `min(k, C(n,y))`-collections of `y`-sets.
///
/// Among collections with the maximal covered count the lexicographically
/// smallest is returned. `budget` caps the number of collections examined.
pub fn brute_force_max_coverage(
    inst: &JohnsonInstance,
    budget: u128,
) -> Result<(CoverCollection, CoverageReport)> {
    let candidates = all_subsets(1, inst.n, inst.y as usize);
    let take = (inst.k as usize).min(candidates.len());
    Error::check_budget(
        "max-coverage enumeration",
        binom(candidates.len() as u64, take as u64),
        budget,
    )?;
    let m = inst.edges.len();
    let masks: Vec<EdgeMask> = candidates
        .iter()
        .map(|s| {
            let mut mask = EdgeMask::zeros(m);
            for (i, t) in inst.edges.iter().enumerate() {
                if s.is_subset_of(t) {
                    mask.set(i);
                }
            }
            mask
        })
        .collect();

    let best = if take == 0 {
        (0, Vec::new())
    } else {
        (0..=candidates.len() - take)
            .into_par_iter()
            .map(|first| {
                let mut search = CoverSearch::new(&masks, take, m);
                search.chosen.push(first);
                search.stack[0] = masks[first].clone();
                search.descend(first + 1, 1);
                (search.best_count, search.best)
            })
            .reduce_with(|a, b| {
                // Branches are disjoint ranges in increasing first index;
                // ties go to the lexicographically smaller index list.
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            })
            .unwrap_or((0, Vec::new()))
    };
    let sets = best.1.iter().map(|&i| candidates[i].clone()).collect();
    let collection = CoverCollection::new(sets)?;
    Ok((collection, CoverageReport::new(best.0, m as u64)))
}

struct CoverSearch<'a> {
    masks: &'a [EdgeMask],
    take: usize,
    stack: Vec<EdgeMask>,
    chosen: Vec<usize>,
    best_count: u64,
    best: Vec<usize>,
    full: u64,
}

impl<'a> CoverSearch<'a> {
    fn new(masks: &'a [EdgeMask], take: usize, edges: usize) -> Self {
        CoverSearch {
            masks,
            take,
            stack: vec![EdgeMask::zeros(edges); take],
            chosen: Vec::with_capacity(take),
            best_count: 0,
            best: Vec::new(),
            full: edges as u64,
        }
    }

    fn descend(&mut self, from: usize, depth: usize) {
        if depth == self.take {
            let c = self.stack[depth - 1].count();
            if self.best.is_empty() || c > self.best_count {
                self.best_count = c;
                self.best = self.chosen.clone();
            }
            return;
        }
        // Lexicographic order means the first full cover found is the answer.
        if self.best_count == self.full && !self.best.is_empty() {
            return;
        }
        let need = self.take - depth;
        for i in from..=self.masks.len() - need {
            let (lower, upper) = self.stack.split_at_mut(depth);
            lower[depth - 1].or_into(&self.masks[i], &mut upper[0]);
            self.chosen.push(i);
            self.descend(i + 1, depth + 1);
            self.chosen.pop();
        }
    }
}

/// Result of the branching decision procedure.
#[derive(Clone, Debug, Serialize)]
pub struct FptOutcome {
    pub coverable: bool,
    pub witness: Option<CoverCollection>,
    /// Nodes of the branching tree that were expanded.
    pub nodes: u64,
    pub max_depth: u32,
}

/// Decides whether at most `k` sets of size `z − 1` cover every edge.
///
/// Branches on the `z` ways of covering the first uncovered edge, to depth
/// at most `k`.
pub fn fpt_cover_decide(inst: &JohnsonInstance) -> Result<FptOutcome> {
    if inst.y + 1 != inst.z {
        return Err(Error::unsupported(format!(
            "branching decision requires y = z - 1, got z={} y={}",
            inst.z, inst.y
        )));
    }
    let mut state = Branching {
        edges: &inst.edges,
        k: inst.k,
        nodes: 0,
        max_depth: 0,
        chosen: Vec::new(),
    };
    let remaining: Vec<usize> = (0..inst.edges.len()).collect();
    let found = state.branch(&remaining, 0);
    let witness = if found {
        Some(CoverCollection::new(state.chosen.clone())?)
    } else {
        None
    };
    Ok(FptOutcome {
        coverable: found,
        witness,
        nodes: state.nodes,
        max_depth: state.max_depth,
    })
}

struct Branching<'a> {
    edges: &'a [Subset],
    k: u32,
    nodes: u64,
    max_depth: u32,
    chosen: Vec<Subset>,
}

impl Branching<'_> {
    fn branch(&mut self, remaining: &[usize], depth: u32) -> bool {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
        let Some(&first) = remaining.first() else {
            return true;
        };
        if depth == self.k {
            return false;
        }
        let t = &self.edges[first];
        for skip in 0..t.len() {
            let mut elems = t.elems().to_vec();
            elems.remove(skip);
            let s = Subset::from_sorted(elems);
            if self.chosen.contains(&s) {
                continue;
            }
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| !s.is_subset_of(&self.edges[i]))
                .collect();
            self.chosen.push(s);
            if self.branch(&rest, depth + 1) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Which edge family [`gen_instance`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Every `z`-subset of `[n]`.
    Complete,
    /// `m` distinct `z`-subsets drawn uniformly, reproducible from `seed`.
    Random { m: u64, seed: u64 },
}

const UNRANK_LIMIT: u128 = 1 << 22;

pub fn gen_instance(kind: GenKind, n: u32, z: u32, y: u32, k: u32) -> Result<JohnsonInstance> {
    if !(1 <= y && y < z && z <= n) {
        return Err(Error::invalid(format!(
            "need 1 <= y < z <= n, got n={n} z={z} y={y}"
        )));
    }
    let total = binom(n as u64, z as u64);
    let edges = match kind {
        GenKind::Complete => {
            Error::check_budget("complete hypergraph", total, UNRANK_LIMIT * 16)?;
            all_subsets(1, n, z as usize)
        }
        GenKind::Random { m, seed } => {
            if m as u128 > total {
                return Err(Error::invalid(format!(
                    "cannot draw {m} distinct edges from C({n},{z}) = {total}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if total <= UNRANK_LIMIT {
                let mut ranks = index::sample(&mut rng, total as usize, m as usize).into_vec();
                ranks.sort_unstable();
                ranks
                    .into_iter()
                    .map(|r| unrank_subset(1, n, z, r as u128))
                    .collect()
            } else {
                let mut set = BTreeSet::new();
                while (set.len() as u64) < m {
                    let elems = index::sample(&mut rng, n as usize, z as usize)
                        .into_iter()
                        .map(|i| i as u32 + 1)
                        .collect();
                    set.insert(Subset::new(elems)?);
                }
                set.into_iter().collect()
            }
        }
    };
    JohnsonInstance::new(n, z, y, k, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Subset {
        x.parse().unwrap()
    }

    fn complete(n: u32, z: u32, y: u32, k: u32) -> JohnsonInstance {
        gen_instance(GenKind::Complete, n, z, y, k).unwrap()
    }

    #[test]
    fn cov_examples() {
        let inst = complete(4, 3, 2, 2);
        assert_eq!(cov(&s("1,2"), &inst).unwrap(), vec![s("1,2,3"), s("1,2,4")]);

        let empty = JohnsonInstance::new(4, 3, 2, 2, vec![]).unwrap();
        assert!(cov(&s("1,2"), &empty).unwrap().is_empty());

        // Oracle: filter all C(5,3) triples for membership of 3.
        let inst = complete(5, 3, 1, 1);
        let expect: Vec<Subset> = all_subsets(1, 5, 3)
            .into_iter()
            .filter(|t| t.contains(3))
            .collect();
        assert_eq!(expect.len(), 6);
        assert_eq!(cov(&s("3"), &inst).unwrap(), expect);
    }

    #[test]
    fn cov_rejects_bad_sets() {
        let inst = complete(4, 3, 2, 2);
        assert!(cov(&s("1"), &inst).is_err());
        assert!(cov(&s("1,9"), &inst).is_err());
    }

    #[test]
    fn coverage_fraction_examples() {
        let inst = complete(4, 3, 2, 2);
        let c = CoverCollection::new(vec![s("1,2"), s("3,4")]).unwrap();
        let r = coverage_fraction(&c, &inst).unwrap();
        assert_eq!(r.fraction, Ratio::from_integer(1));

        let c = CoverCollection::new(vec![s("1,2")]).unwrap();
        let r = coverage_fraction(&c, &inst).unwrap();
        assert_eq!((r.covered, r.total), (2, 4));

        let r = coverage_fraction(&CoverCollection::default(), &inst).unwrap();
        assert_eq!(r.covered, 0);
    }

    #[test]
    fn coverage_fraction_budget_error() {
        let inst = complete(4, 3, 2, 1);
        let c = CoverCollection::new(vec![s("1,2"), s("3,4")]).unwrap();
        assert!(matches!(
            coverage_fraction(&c, &inst),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn brute_force_examples() {
        let (_, r) = brute_force_max_coverage(&complete(4, 3, 2, 1), 1 << 20).unwrap();
        assert_eq!(r.covered, 2);
        let (best, r) = brute_force_max_coverage(&complete(4, 3, 2, 2), 1 << 20).unwrap();
        assert_eq!(r.covered, 4);
        // Lexicographically first full cover.
        assert_eq!(best.sets(), &[s("1,2"), s("3,4")]);
        let (_, r) = brute_force_max_coverage(&complete(5, 3, 1, 1), 1 << 20).unwrap();
        assert_eq!(r.covered, 6);
    }

    #[test]
    fn brute_force_budget() {
        let inst = complete(8, 3, 2, 4);
        assert!(matches!(
            brute_force_max_coverage(&inst, 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn fpt_examples() {
        let out = fpt_cover_decide(&complete(4, 3, 2, 2)).unwrap();
        assert!(out.coverable);
        let w = out.witness.unwrap();
        let inst = complete(4, 3, 2, 2);
        assert!(coverage_fraction(&w, &inst).unwrap().is_complete());

        assert!(!fpt_cover_decide(&complete(4, 3, 2, 1)).unwrap().coverable);

        let empty = JohnsonInstance::new(5, 3, 2, 0, vec![]).unwrap();
        let out = fpt_cover_decide(&empty).unwrap();
        assert!(out.coverable);
        assert!(out.witness.unwrap().is_empty());
    }

    #[test]
    fn fpt_tree_is_bounded() {
        let inst = complete(7, 3, 2, 4);
        let out = fpt_cover_decide(&inst).unwrap();
        assert!(out.max_depth <= 4);
        // At most 1 + z + ... + z^k expanded nodes.
        let bound: u64 = (0..=4).map(|d| 3u64.pow(d)).sum();
        assert!(out.nodes <= bound);
    }

    #[test]
    fn fpt_rejects_other_arities() {
        assert!(matches!(
            fpt_cover_decide(&complete(5, 3, 1, 2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn gen_examples() {
        assert_eq!(complete(4, 3, 2, 1).edges().len(), 4);
        assert_eq!(complete(6, 4, 3, 1).edges().len(), 15);
        let a = gen_instance(GenKind::Random { m: 20, seed: 7 }, 10, 3, 2, 3).unwrap();
        let b = gen_instance(GenKind::Random { m: 20, seed: 7 }, 10, 3, 2, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges().len(), 20);
        assert!(gen_instance(GenKind::Random { m: 5, seed: 0 }, 4, 3, 2, 1).is_err());
    }

    #[test]
    fn complete_instance_cover_counts() {
        for (n, z) in [(5, 3), (6, 4), (7, 3)] {
            let inst = complete(n, z, z - 1, 1);
            for sset in all_subsets(1, n, (z - 1) as usize) {
                assert_eq!(cov(&sset, &inst).unwrap().len() as u32, n - z + 1);
            }
        }
    }

    #[test]
    fn instance_validation() {
        assert!(JohnsonInstance::new(4, 3, 3, 1, vec![]).is_err());
        assert!(JohnsonInstance::new(4, 3, 2, 1, vec![s("1,2,3"), s("1,2,3")]).is_err());
        assert!(JohnsonInstance::new(4, 3, 2, 1, vec![s("1,2,5")]).is_err());
    }
}
