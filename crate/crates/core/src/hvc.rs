//! Weighted 3-hypergraphs built from small multilayered PCPs, their
//! completeness covers, and the densifying replication into a simple
//! unweighted hypergraph.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::report::{ratio, ser_bigrational};

/// Largest alphabet a layer may use; cube points are bit masks.
pub const MAX_ALPHABET: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PcpEdge {
    pub i: u32,
    pub j: u32,
    pub vi: u32,
    pub vj: u32,
    /// `projection[b]` is the label of `vi` forced by label `b` of `vj`.
    pub projection: Vec<u32>,
}

/// Layers are numbered `1..=ell`; vertices inside a layer from 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredPcp {
    pub ell: u32,
    pub layer_sizes: Vec<u32>,
    pub alphabets: Vec<u32>,
    pub edges: Vec<PcpEdge>,
}

impl LayeredPcp {
    pub fn new(
        ell: u32,
        layer_sizes: Vec<u32>,
        alphabets: Vec<u32>,
        edges: Vec<PcpEdge>,
    ) -> Result<Self> {
        if ell < 2 {
            return Err(Error::invalid(format!("need at least 2 layers, got {ell}")));
        }
        if layer_sizes.len() != ell as usize || alphabets.len() != ell as usize {
            return Err(Error::invalid("one size and one alphabet per layer"));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::invalid("every layer needs a vertex"));
        }
        if let Some(a) = alphabets.iter().find(|&&a| a == 0 || a > MAX_ALPHABET) {
            return Err(Error::invalid(format!(
                "alphabet size {a} outside 1..={MAX_ALPHABET}"
            )));
        }
        let pcp = LayeredPcp {
            ell,
            layer_sizes,
            alphabets,
            edges,
        };
        for e in &pcp.edges {
            pcp.check_edge(e)?;
        }
        Ok(pcp)
    }

    fn check_edge(&self, e: &PcpEdge) -> Result<()> {
        if !(1 <= e.i && e.i < e.j && e.j <= self.ell) {
            return Err(Error::invalid(format!(
                "edge layers ({},{}) need 1 <= i < j <= ell",
                e.i, e.j
            )));
        }
        if e.vi >= self.size(e.i) || e.vj >= self.size(e.j) {
            return Err(Error::invalid(format!(
                "edge ({},{}) names a vertex outside its layer",
                e.vi, e.vj
            )));
        }
        let (si, sj) = (self.alphabet(e.i), self.alphabet(e.j));
        if e.projection.len() != sj as usize {
            return Err(Error::invalid(format!(
                "projection has {} entries, layer {} alphabet has {sj}",
                e.projection.len(),
                e.j
            )));
        }
        let mut hit = vec![false; si as usize];
        for &a in &e.projection {
            if a >= si {
                return Err(Error::invalid(format!(
                    "projection value {a} outside alphabet {si}"
                )));
            }
            hit[a as usize] = true;
        }
        if hit.contains(&false) {
            return Err(Error::invalid(
                "projection is not onto the lower layer's alphabet",
            ));
        }
        Ok(())
    }

    pub fn size(&self, layer: u32) -> u32 {
        self.layer_sizes[layer as usize - 1]
    }

    pub fn alphabet(&self, layer: u32) -> u32 {
        self.alphabets[layer as usize - 1]
    }

    /// Whether `sigma` (one label per vertex per layer) satisfies every edge.
    pub fn satisfies(&self, sigma: &[Vec<u32>]) -> Result<bool> {
        self.check_assignment(sigma)?;
        Ok(self.edges.iter().all(|e| {
            e.projection[sigma[e.j as usize - 1][e.vj as usize] as usize]
                == sigma[e.i as usize - 1][e.vi as usize]
        }))
    }

    fn check_assignment(&self, sigma: &[Vec<u32>]) -> Result<()> {
        if sigma.len() != self.ell as usize {
            return Err(Error::invalid("assignment needs one row per layer"));
        }
        for (l, row) in sigma.iter().enumerate() {
            let layer = l as u32 + 1;
            if row.len() != self.size(layer) as usize {
                return Err(Error::invalid(format!(
                    "assignment row {layer} has wrong length"
                )));
            }
            if let Some(a) = row.iter().find(|&&a| a >= self.alphabet(layer)) {
                return Err(Error::invalid(format!(
                    "label {a} outside layer {layer} alphabet"
                )));
            }
        }
        Ok(())
    }

    /// `(ℓ·|V_i|·2^{|Σ_i|})^{-1}`.
    pub fn vertex_weight(&self, layer: u32) -> BigRational {
        let den = BigInt::from(self.ell)
            * BigInt::from(self.size(layer))
            * (BigInt::one() << self.alphabet(layer));
        BigRational::new(BigInt::one(), den)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerPair {
    pub i: u32,
    pub j: u32,
    #[serde(serialize_with = "ser_bigrational")]
    pub prob: BigRational,
}

/// `P(i) = (ℓ−i)² / (ℓ(ℓ−1)(2ℓ−1)/6)` for `i = 1..=ℓ`.
pub fn layer_marginal(ell: u32) -> Result<Vec<BigRational>> {
    if ell < 2 {
        return Err(Error::invalid(format!("need ell >= 2, got {ell}")));
    }
    let l = ell as i64;
    let norm = l * (l - 1) * (2 * l - 1);
    Ok((1..=l)
        .map(|i| ratio(6 * (l - i) * (l - i), norm))
        .collect())
}

/// `i` from the marginal, then `j` uniform over `i+1..=ℓ`.
pub fn layer_pair_distribution(ell: u32) -> Result<Vec<LayerPair>> {
    let marginal = layer_marginal(ell)?;
    let mut out = Vec::new();
    for i in 1..ell {
        let share = &marginal[i as usize - 1] / BigRational::from_integer(BigInt::from(ell - i));
        for j in i + 1..=ell {
            out.push(LayerPair {
                i,
                j,
                prob: share.clone(),
            });
        }
    }
    Ok(out)
}

/// A hypergraph vertex `(layer, vertex, x)`; bit `a` of `cube` set means `x_a = −1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HvcVertex {
    pub layer: u32,
    pub vertex: u32,
    pub cube: u32,
}

impl fmt::Display for HvcVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.layer, self.vertex, self.cube)
    }
}

impl FromStr for HvcVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.parse::<u32>().map_err(|_| {
                Error::invalid(format!("bad vertex {s:?}, expected layer:vertex:cube"))
            })
        };
        match parts.as_slice() {
            [l, v, c] => Ok(HvcVertex {
                layer: num(l)?,
                vertex: num(v)?,
                cube: num(c)?,
            }),
            _ => Err(Error::invalid(format!(
                "bad vertex {s:?}, expected layer:vertex:cube"
            ))),
        }
    }
}

impl Serialize for HvcVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Sorted vertex triple; entries may repeat when two outcomes coincide.
pub type Triple = [HvcVertex; 3];

fn canonical(mut t: Triple) -> Triple {
    t.sort();
    t
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedTriple {
    pub vertices: Triple,
    #[serde(serialize_with = "ser_bigrational")]
    pub weight: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightedHypergraph3 {
    /// Sorted by vertices; no repeats, no zero weights.
    pub triples: Vec<WeightedTriple>,
    /// Exact sampled fractions rather than probabilities.
    pub sampled: bool,
}

impl WeightedHypergraph3 {
    /// Merges repeated triples by adding their weights.
    pub fn from_triples(list: Vec<(Triple, BigRational)>) -> Result<Self> {
        let mut acc: BTreeMap<Triple, BigRational> = BTreeMap::new();
        for (t, w) in list {
            if w < BigRational::zero() {
                return Err(Error::invalid(format!("negative weight {w}")));
            }
            *acc.entry(canonical(t)).or_insert_with(BigRational::zero) += w;
        }
        Ok(Self::from_map(acc, false))
    }

    fn from_map(acc: BTreeMap<Triple, BigRational>, sampled: bool) -> Self {
        WeightedHypergraph3 {
            triples: acc
                .into_iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(vertices, weight)| WeightedTriple { vertices, weight })
                .collect(),
            sampled,
        }
    }

    pub fn total_weight(&self) -> BigRational {
        self.triples
            .iter()
            .fold(BigRational::zero(), |s, t| s + &t.weight)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn weight_of(&self, t: &Triple) -> BigRational {
        let key = canonical(*t);
        self.triples
            .binary_search_by(|w| w.vertices.cmp(&key))
            .map(|i| self.triples[i].weight.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    /// Enumerates every outcome; `budget` caps outcomes over all edges.
    Exact { budget: u128 },
    /// Weights are empirical frequencies over `samples` draws.
    MonteCarlo { samples: u64, seed: u64 },
}

/// Submasks of `mask`, including 0 and `mask` itself.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// Label positions `b` of the upper layer whose projected lower coordinate
/// is `+1` in `x`; there `z_b = −y_b` is forced.
fn forced_mask(projection: &[u32], x: u32) -> u32 {
    projection
        .iter()
        .enumerate()
        .filter(|(_, &a)| x >> a & 1 == 0)
        .fold(0, |m, (b, _)| m | 1 << b)
}

fn edges_by_pair(pcp: &LayeredPcp) -> BTreeMap<(u32, u32), Vec<&PcpEdge>> {
    let mut by_pair: BTreeMap<(u32, u32), Vec<&PcpEdge>> = BTreeMap::new();
    for e in &pcp.edges {
        by_pair.entry((e.i, e.j)).or_default().push(e);
    }
    by_pair
}

fn delta_pow(delta: &BigRational, k: u32) -> BigRational {
    num_traits::pow(delta.clone(), k as usize)
}

pub fn build_weighted_hypergraph(
    pcp: &LayeredPcp,
    delta: &BigRational,
    mode: BuildMode,
) -> Result<WeightedHypergraph3> {
    if delta < &BigRational::zero() || delta > &BigRational::one() {
        return Err(Error::invalid(format!(
            "delta must lie in [0,1], got {delta}"
        )));
    }
    let pairs = layer_pair_distribution(pcp.ell)?;
    let by_pair = edges_by_pair(pcp);
    match mode {
        BuildMode::Exact { budget } => {
            let outcomes = pcp.edges.iter().fold(0u128, |s, e| {
                s.saturating_add(1u128 << (pcp.alphabet(e.i) + 2 * pcp.alphabet(e.j)))
            });
            Error::check_budget("hypergraph outcomes", outcomes, budget)?;
            let one = BigRational::one();
            let keep = &one - delta;
            let maps: Vec<BTreeMap<Triple, BigRational>> = pairs
                .par_iter()
                .filter_map(|lp| by_pair.get(&(lp.i, lp.j)).map(|es| (lp, es)))
                .flat_map_iter(|(lp, es)| {
                    let share = &lp.prob / BigRational::from_integer(BigInt::from(es.len()));
                    es.iter().map(move |e| (share.clone(), *e))
                })
                .map(|(share, e)| {
                    let (si, sj) = (pcp.alphabet(e.i), pcp.alphabet(e.j));
                    let uniform = BigRational::new(BigInt::one(), BigInt::one() << (si + sj));
                    let base = share * uniform;
                    let mut local = BTreeMap::new();
                    for x in 0..1u32 << si {
                        let forced = forced_mask(&e.projection, x);
                        let free = !forced & ((1u32 << sj) - 1);
                        let nfree = free.count_ones();
                        for y in 0..1u32 << sj {
                            for flips in submasks(free) {
                                let k = flips.count_ones();
                                let p = delta_pow(delta, k) * delta_pow(&keep, nfree - k);
                                if p.is_zero() {
                                    continue;
                                }
                                let z = y ^ forced ^ flips;
                                let t = canonical([
                                    HvcVertex {
                                        layer: e.i,
                                        vertex: e.vi,
                                        cube: x,
                                    },
                                    HvcVertex {
                                        layer: e.j,
                                        vertex: e.vj,
                                        cube: y,
                                    },
                                    HvcVertex {
                                        layer: e.j,
                                        vertex: e.vj,
                                        cube: z,
                                    },
                                ]);
                                *local.entry(t).or_insert_with(BigRational::zero) += &base * p;
                            }
                        }
                    }
                    local
                })
                .collect();
            let mut acc: BTreeMap<Triple, BigRational> = BTreeMap::new();
            for m in maps {
                for (t, w) in m {
                    *acc.entry(t).or_insert_with(BigRational::zero) += w;
                }
            }
            Ok(WeightedHypergraph3::from_map(acc, false))
        }
        BuildMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("need at least one sample"));
            }
            let cdf: Vec<(f64, (u32, u32))> = pairs
                .iter()
                .scan(0.0, |s, lp| {
                    *s += lp.prob.to_f64().unwrap_or(0.0);
                    Some((*s, (lp.i, lp.j)))
                })
                .collect();
            let flip_p = delta.to_f64().unwrap_or(0.0).clamp(0.0, 1.0);
            const CHUNK: u64 = 1 << 16;
            let chunks = samples.div_ceil(CHUNK);
            let counts: Vec<BTreeMap<Triple, u64>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(c);
                    let n = CHUNK.min(samples - c * CHUNK);
                    let mut local = BTreeMap::new();
                    for _ in 0..n {
                        let u: f64 = rng.random();
                        let pair = cdf
                            .iter()
                            .find(|(s, _)| u < *s)
                            .map_or(cdf[cdf.len() - 1].1, |(_, p)| *p);
                        let Some(es) = by_pair.get(&pair) else {
                            continue;
                        };
                        let e = es[rng.random_range(0..es.len())];
                        let (si, sj) = (pcp.alphabet(e.i), pcp.alphabet(e.j));
                        let x = rng.random::<u32>() & ((1u32 << si) - 1);
                        let y = rng.random::<u32>() & ((1u32 << sj) - 1);
                        let forced = forced_mask(&e.projection, x);
                        let mut z = y ^ forced;
                        for b in 0..sj {
                            if forced >> b & 1 == 0 && rng.random_bool(flip_p) {
                                z ^= 1 << b;
                            }
                        }
                        let t = canonical([
                            HvcVertex {
                                layer: e.i,
                                vertex: e.vi,
                                cube: x,
                            },
                            HvcVertex {
                                layer: e.j,
                                vertex: e.vj,
                                cube: y,
                            },
                            HvcVertex {
                                layer: e.j,
                                vertex: e.vj,
                                cube: z,
                            },
                        ]);
                        *local.entry(t).or_insert(0) += 1;
                    }
                    local
                })
                .collect();
            let mut acc: BTreeMap<Triple, u64> = BTreeMap::new();
            for m in counts {
                for (t, n) in m {
                    *acc.entry(t).or_insert(0) += n;
                }
            }
            let total = BigInt::from(samples);
            Ok(WeightedHypergraph3::from_map(
                acc.into_iter()
                    .map(|(t, n)| (t, BigRational::new(BigInt::from(n), total.clone())))
                    .collect(),
                true,
            ))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    /// Number of vertices in the cover `{(v,x) : x_{σ(v)} = −1}`.
    pub cover_size: u128,
    #[serde(serialize_with = "ser_bigrational")]
    pub cover_weight: BigRational,
    pub all_hit: bool,
    pub triples_checked: usize,
    /// A positive-weight triple missing the cover.
    pub witness: Option<Triple>,
    pub assignment_satisfies: bool,
}

pub fn in_cover(sigma: &[Vec<u32>], v: &HvcVertex) -> bool {
    let label = sigma[v.layer as usize - 1][v.vertex as usize];
    v.cube >> label & 1 == 1
}

pub fn completeness_cover_check(
    pcp: &LayeredPcp,
    hg: &WeightedHypergraph3,
    sigma: &[Vec<u32>],
) -> Result<CompletenessReport> {
    let assignment_satisfies = pcp.satisfies(sigma)?;
    let mut cover_size = 0u128;
    let mut cover_weight = BigRational::zero();
    for layer in 1..=pcp.ell {
        let half = 1u128 << (pcp.alphabet(layer) - 1);
        let count = half * pcp.size(layer) as u128;
        cover_size += count;
        cover_weight += pcp.vertex_weight(layer) * BigRational::from_integer(BigInt::from(count));
    }
    for t in &hg.triples {
        if let Some(v) = t
            .vertices
            .iter()
            .find(|v| v.layer < 1 || v.layer > pcp.ell || v.vertex >= pcp.size(v.layer))
        {
            return Err(Error::invalid(format!("vertex {v} is not in the PCP")));
        }
    }
    let witness = hg
        .triples
        .iter()
        .find(|t| !t.vertices.iter().any(|v| in_cover(sigma, v)))
        .map(|t| t.vertices);
    Ok(CompletenessReport {
        cover_size,
        cover_weight,
        all_hit: witness.is_none(),
        triples_checked: hg.triples.len(),
        witness,
        assignment_satisfies,
    })
}

/// A vertex of the densified hypergraph: a base vertex and a copy in `1..=b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenseVertex {
    pub base: HvcVertex,
    pub copy: u32,
}

impl fmt::Display for DenseVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.base, self.copy)
    }
}

impl Serialize for DenseVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DenseHypergraph {
    pub b: u32,
    pub c: u64,
    pub seed: u64,
    /// Input triple count.
    pub m: usize,
    /// Replicas generated before deletion, `Σ ⌊c·w⌋`.
    pub replicas: u64,
    /// Distinct triples that occurred more than once and were deleted.
    pub removed_triples: u64,
    /// Replicas lost to those deletions.
    pub removed_copies: u64,
    /// `c − m − 10c²/b³`.
    pub retained_bound: f64,
    pub edges: Vec<[DenseVertex; 3]>,
}

impl DenseHypergraph {
    pub fn meets_retained_bound(&self) -> bool {
        self.edges.len() as f64 >= self.retained_bound
    }

    /// No triple appears twice.
    pub fn is_simple(&self) -> bool {
        let mut sorted = self.edges.clone();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    pub fn all_hit_by(&self, cover: impl Fn(&HvcVertex) -> bool) -> bool {
        self.edges.iter().all(|e| e.iter().any(|v| cover(&v.base)))
    }
}

/// Replicates each triple `⌊c·w⌋` times onto random copies in `[b]³` and
/// deletes every triple produced more than once. One seeded stream, in
/// input order, so the output depends only on the seed.
pub fn densify(hg: &WeightedHypergraph3, b: u32, c: u64, seed: u64) -> Result<DenseHypergraph> {
    if b == 0 || c == 0 {
        return Err(Error::invalid("b and c must be >= 1"));
    }
    if hg.total_weight() != BigRational::one() {
        return Err(Error::invalid(format!(
            "triple weights sum to {}, expected 1",
            hg.total_weight()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cbig = BigRational::from_integer(BigInt::from(c));
    let mut counts: BTreeMap<[DenseVertex; 3], u64> = BTreeMap::new();
    let mut order = Vec::new();
    let mut replicas = 0u64;
    for t in &hg.triples {
        let copies = (&cbig * &t.weight)
            .floor()
            .to_integer()
            .to_u64()
            .unwrap_or(0);
        replicas += copies;
        for _ in 0..copies {
            let mut e = t.vertices.map(|base| DenseVertex {
                base,
                copy: rng.random_range(1..=b),
            });
            e.sort();
            let n = counts.entry(e).or_insert(0);
            if *n == 0 {
                order.push(e);
            }
            *n += 1;
        }
    }
    let mut removed_triples = 0;
    let mut removed_copies = 0;
    for n in counts.values() {
        if *n > 1 {
            removed_triples += 1;
            removed_copies += n;
        }
    }
    let edges: Vec<_> = order.into_iter().filter(|e| counts[e] == 1).collect();
    let (cf, bf) = (c as f64, b as f64);
    Ok(DenseHypergraph {
        b,
        c,
        seed,
        m: hg.len(),
        replicas,
        removed_triples,
        removed_copies,
        retained_bound: cf - hg.len() as f64 - 10.0 * cf * cf / (bf * bf * bf),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u128 = 1 << 24;

    fn single_edge(sigma_size: u32) -> LayeredPcp {
        LayeredPcp::new(
            2,
            vec![1, 1],
            vec![sigma_size, sigma_size],
            vec![PcpEdge {
                i: 1,
                j: 2,
                vi: 0,
                vj: 0,
                projection: (0..sigma_size).collect(),
            }],
        )
        .unwrap()
    }

    fn v(layer: u32, cube: u32) -> HvcVertex {
        HvcVertex {
            layer,
            vertex: 0,
            cube,
        }
    }

    #[test]
    fn layer_distribution_examples() {
        assert_eq!(
            layer_marginal(3).unwrap(),
            vec![ratio(4, 5), ratio(1, 5), ratio(0, 1)]
        );
        let d = layer_pair_distribution(2).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].i, d[0].j), (1, 2));
        assert!(d[0].prob.is_one());
        for ell in 2..12 {
            let total = layer_pair_distribution(ell)
                .unwrap()
                .iter()
                .fold(BigRational::zero(), |s, p| s + &p.prob);
            assert!(total.is_one());
            assert!(layer_marginal(ell).unwrap()[ell as usize - 1].is_zero());
        }
        assert!(layer_pair_distribution(1).is_err());
    }

    #[test]
    fn singleton_alphabets_delta_zero() {
        let pcp = single_edge(1);
        let hg = build_weighted_hypergraph(
            &pcp,
            &BigRational::zero(),
            BuildMode::Exact { budget: BUDGET },
        )
        .unwrap();
        // x = +1 (cube 0): z = −y; x = −1 (cube 1): z = y.
        let q = ratio(1, 4);
        assert_eq!(hg.weight_of(&[v(1, 0), v(2, 0), v(2, 1)]), &q + &q);
        assert_eq!(hg.weight_of(&[v(1, 1), v(2, 0), v(2, 0)]), q);
        assert_eq!(hg.weight_of(&[v(1, 1), v(2, 1), v(2, 1)]), ratio(1, 4));
        assert!(hg.total_weight().is_one());
        assert_eq!(hg.len(), 3);
    }

    #[test]
    fn exact_weights_sum_to_one() {
        let pcp = LayeredPcp::new(
            3,
            vec![1, 2, 1],
            vec![2, 3, 3],
            vec![
                PcpEdge {
                    i: 1,
                    j: 2,
                    vi: 0,
                    vj: 0,
                    projection: vec![0, 1, 1],
                },
                PcpEdge {
                    i: 1,
                    j: 2,
                    vi: 0,
                    vj: 1,
                    projection: vec![1, 0, 0],
                },
                PcpEdge {
                    i: 1,
                    j: 3,
                    vi: 0,
                    vj: 0,
                    projection: vec![0, 0, 1],
                },
                PcpEdge {
                    i: 2,
                    j: 3,
                    vi: 1,
                    vj: 0,
                    projection: vec![2, 1, 0],
                },
            ],
        )
        .unwrap();
        for delta in [ratio(0, 1), ratio(1, 8), ratio(1, 1)] {
            let hg = build_weighted_hypergraph(&pcp, &delta, BuildMode::Exact { budget: BUDGET })
                .unwrap();
            assert!(hg.total_weight().is_one());
            assert!(hg.triples.iter().all(|t| t.weight > BigRational::zero()));
        }
        let sigma = vec![vec![0], vec![0, 1], vec![1]];
        assert!(pcp.satisfies(&sigma).unwrap());
        let hg = build_weighted_hypergraph(&pcp, &ratio(1, 8), BuildMode::Exact { budget: BUDGET })
            .unwrap();
        let r = completeness_cover_check(&pcp, &hg, &sigma).unwrap();
        assert!(r.all_hit);
        assert_eq!(r.cover_weight, ratio(1, 2));
    }

    #[test]
    fn vertex_weights_sum_to_one() {
        let pcp = LayeredPcp::new(3, vec![2, 3, 1], vec![1, 2, 3], vec![]).unwrap();
        let total = (1..=3).fold(BigRational::zero(), |s, l| {
            s + pcp.vertex_weight(l)
                * BigRational::from_integer(BigInt::from(
                    pcp.size(l) as u64 * (1u64 << pcp.alphabet(l)),
                ))
        });
        assert!(total.is_one());
    }

    #[test]
    fn completeness_examples() {
        let pcp = single_edge(2);
        let hg =
            build_weighted_hypergraph(&pcp, &ratio(1, 10), BuildMode::Exact { budget: BUDGET })
                .unwrap();
        let good = vec![vec![1], vec![1]];
        let r = completeness_cover_check(&pcp, &hg, &good).unwrap();
        assert!(r.all_hit && r.assignment_satisfies);
        assert_eq!(r.cover_weight, ratio(1, 2));

        let hg0 = build_weighted_hypergraph(
            &pcp,
            &BigRational::zero(),
            BuildMode::Exact { budget: BUDGET },
        )
        .unwrap();
        let bad = vec![vec![0], vec![1]];
        let r = completeness_cover_check(&pcp, &hg0, &bad).unwrap();
        assert!(!r.assignment_satisfies && !r.all_hit);
        let w = r.witness.unwrap();
        assert!(w.iter().all(|x| !in_cover(&bad, x)));

        let empty = LayeredPcp::new(2, vec![1, 1], vec![1, 1], vec![]).unwrap();
        let hg = build_weighted_hypergraph(
            &empty,
            &BigRational::zero(),
            BuildMode::Exact { budget: BUDGET },
        )
        .unwrap();
        assert!(
            completeness_cover_check(&empty, &hg, &[vec![0], vec![0]])
                .unwrap()
                .all_hit
        );
        assert!(completeness_cover_check(&empty, &hg, &[vec![1], vec![0]]).is_err());
    }

    #[test]
    fn pcp_validation() {
        let bad_proj = PcpEdge {
            i: 1,
            j: 2,
            vi: 0,
            vj: 0,
            projection: vec![0, 0],
        };
        assert!(LayeredPcp::new(2, vec![1, 1], vec![2, 2], vec![bad_proj]).is_err());
        let backwards = PcpEdge {
            i: 2,
            j: 1,
            vi: 0,
            vj: 0,
            projection: vec![0],
        };
        assert!(LayeredPcp::new(2, vec![1, 1], vec![1, 1], vec![backwards]).is_err());
        assert!(LayeredPcp::new(1, vec![1], vec![1], vec![]).is_err());
    }

    #[test]
    fn exact_budget() {
        let pcp = single_edge(3);
        assert!(matches!(
            build_weighted_hypergraph(&pcp, &ratio(1, 2), BuildMode::Exact { budget: 100 }),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let pcp = single_edge(2);
        let mode = BuildMode::MonteCarlo {
            samples: 200_000,
            seed: 4,
        };
        let a = build_weighted_hypergraph(&pcp, &ratio(1, 4), mode).unwrap();
        let b = build_weighted_hypergraph(&pcp, &ratio(1, 4), mode).unwrap();
        assert!(a.sampled && a.total_weight().is_one());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    fn four_edges() -> WeightedHypergraph3 {
        WeightedHypergraph3::from_triples(
            (0..4)
                .map(|k| ([v(1, 3 * k), v(1, 3 * k + 1), v(1, 3 * k + 2)], ratio(1, 4)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn densify_examples() {
        let hg = four_edges();
        let d = densify(&hg, 8, 100, 1).unwrap();
        assert_eq!(d.replicas, 100);
        assert!(d.is_simple());
        assert_eq!(d.edges.len() as u64, d.replicas - d.removed_copies);
        assert!(d.edges.len() as u64 >= 100 - 4 - d.removed_copies);

        let d = densify(&hg, 1, 100, 1).unwrap();
        assert!(d.edges.is_empty());
        assert_eq!(d.removed_triples, 4);

        let again = densify(&hg, 8, 100, 1).unwrap();
        assert_eq!(again.edges, densify(&hg, 8, 100, 1).unwrap().edges);

        let half =
            WeightedHypergraph3::from_triples(vec![([v(1, 0), v(1, 1), v(1, 2)], ratio(1, 2))])
                .unwrap();
        assert!(densify(&half, 8, 100, 1).is_err());
    }

    #[test]
    fn densify_transfers_cover() {
        let pcp = single_edge(2);
        let hg =
            build_weighted_hypergraph(&pcp, &ratio(1, 10), BuildMode::Exact { budget: BUDGET })
                .unwrap();
        let sigma = vec![vec![0], vec![0]];
        for seed in 0..5 {
            let d = densify(&hg, 4, 500, seed).unwrap();
            assert!(d.is_simple());
            assert!(d.all_hit_by(|x| in_cover(&sigma, x)));
        }
    }

    #[test]
    fn vertex_text_roundtrip() {
        let x = HvcVertex {
            layer: 2,
            vertex: 5,
            cube: 9,
        };
        assert_eq!(x.to_string().parse::<HvcVertex>().unwrap(), x);
        assert!("1:2".parse::<HvcVertex>().is_err());
    }
}
