//! Cross-module invariants, checked against brute-force or closed-form oracles.

use jchlab::codes::{pick_code_params, verify_relative_distance, DistanceMode, RsCode};
use jchlab::embed::{
    embed_l1, embed_l2_scaled, embed_lp_halfshift, verify_gap_realization, GapRealization,
};
use jchlab::factors::{factors_from_gamma, turan_random_uncovered};
use jchlab::hvc::{build_weighted_hypergraph, densify, BuildMode, LayeredPcp, PcpEdge};
use jchlab::johnson::{
    brute_force_max_coverage, cov, coverage_fraction, fpt_cover_decide, gen_instance,
    CoverCollection, GenKind,
};
use jchlab::reduce::{
    best_center_continuous, build_discrete_instance, clustering_cost, coverage_distance_profile,
    CenterScope, ClusteringInstance, LabeledPoint,
};
use jchlab::relax::{
    build_clique_gap_instance, build_sdp_solution, integral_min_uncovered, verify_sdp_solution,
    well_separated, SearchMode,
};
use jchlab::report::{ratio, to_f64};
use jchlab::subset::all_subsets;
use jchlab::{binom, Metric};
use num_traits::{One, Zero};
use proptest::prelude::*;

const BUDGET: u128 = 1 << 30;

fn instance(n: u32, z: u32, m_frac: f64, k: u32, seed: u64) -> jchlab::johnson::JohnsonInstance {
    let total = binom(n as u64, z as u64) as u64;
    let m = ((total as f64 * m_frac).ceil() as u64).clamp(1, total);
    gen_instance(GenKind::Random { m, seed }, n, z, z - 1, k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branching_agrees_with_exhaustive(
        z in 3u32..=4, n_extra in 0u32..=3, m_frac in 0.0f64..1.0, k in 1u32..=4, seed in any::<u64>(),
    ) {
        let n = z + n_extra;
        prop_assume!(binom(n as u64, (z - 1) as u64) <= 20);
        let inst = instance(n, z, m_frac, k, seed);
        let (_, report) = brute_force_max_coverage(&inst, BUDGET).unwrap();
        let fpt = fpt_cover_decide(&inst).unwrap();
        prop_assert_eq!(fpt.coverable, report.fraction.is_one());
        if let Some(w) = fpt.witness {
            prop_assert!(coverage_fraction(&w, &inst).unwrap().is_complete());
        }
    }

    #[test]
    fn coverage_is_monotone(n in 4u32..=8, m_frac in 0.0f64..1.0, seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let inst = instance(n, 3, m_frac, 5, seed);
        let sets = all_subsets(1, n, 2);
        let mut chosen: Vec<_> = picks.iter().map(|i| sets[i.index(sets.len())].clone()).collect();
        chosen.sort();
        chosen.dedup();
        let mut prev = 0;
        for end in 0..=chosen.len() {
            let c = CoverCollection::new(chosen[..end].to_vec()).unwrap();
            let covered = coverage_fraction(&c, &inst).unwrap().covered;
            prop_assert!(covered >= prev);
            prev = covered;
        }
    }

    #[test]
    fn factors_are_ordered(alpha in 0.0f64..0.999, gamma in 1.001f64..10.0, delta in 1u32..5) {
        let (z1, z2) = factors_from_gamma(delta, alpha, gamma).unwrap();
        prop_assert!(z2 > z1 && z1 > 1.0);
    }

    #[test]
    fn strict_code_choice_meets_distance(n in 1u64..1000, eps in 0.5f64..0.99) {
        match pick_code_params(n, 2, 1, eps) {
            Ok(choice) => {
                let q = choice.code.q() as f64;
                prop_assert!(to_f64_ratio(choice.code.relative_distance()) >= 1.0 - 3.0 / q.sqrt());
                prop_assert!(choice.code.message_count() >= n as u128);
            }
            Err(e) => prop_assert!(!e.to_string().is_empty()),
        }
    }

    #[test]
    fn realizations_are_uniform_and_bounded(q in 2u32..=7, t_off in 0u32..6, s_off in 0u32..6, p in prop::sample::select(vec![3.0, 4.0, 8.0])) {
        let t = 2 + t_off % (q - 1);
        let s = 1 + s_off % (t - 1);
        let plain = embed_l1(q, t, s).unwrap();
        let scaled = embed_l2_scaled(q, t, s).unwrap();
        let shift = embed_lp_halfshift(q, t, p).unwrap();
        for real in [&plain, &scaled, &shift] {
            let r = verify_gap_realization(real, None, BUDGET).unwrap();
            prop_assert!(r.edge_distance_max - r.edge_distance_min <= 1e-9);
            if real.s + 1 == real.t {
                if let Some(ratio) = r.min_nonedge_over_edge {
                    prop_assert!(ratio <= 3.0 + 1e-9);
                }
            }
        }
        let r = verify_gap_realization(&scaled, None, BUDGET).unwrap();
        if let Some(ratio) = r.min_nonedge_over_edge {
            let d = (t - s) as f64;
            prop_assert!(ratio >= ((d + 2.0) / d).sqrt());
        }
    }

    #[test]
    fn discrete_reduction_distances(
        n in 4u32..=9, m_frac in 0.0f64..1.0, seed in any::<u64>(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
        which in 0usize..3,
    ) {
        let inst = instance(n, 3, m_frac, 3, seed);
        let code = RsCode::new(7, 2).unwrap();
        let real: GapRealization = match which {
            0 => embed_l1(7, 3, 2).unwrap(),
            1 => embed_l2_scaled(7, 3, 2).unwrap(),
            _ => embed_lp_halfshift(7, 3, 4.0).unwrap(),
        };
        let ci = build_discrete_instance(&inst, &code, &real, CenterScope::All, 1, BUDGET).unwrap();
        let meta = ci.meta.clone().unwrap();
        let (base, floor) = (meta.base_distance(), meta.soundness_floor());

        let (witness, report) = brute_force_max_coverage(&inst, BUDGET).unwrap();
        if report.is_complete() {
            let idx: Vec<usize> = witness.sets().iter().map(|s| ci.center_index(&s.to_string()).unwrap()).collect();
            for p in coverage_distance_profile(&ci, &idx).unwrap() {
                prop_assert!((p.distance - base).abs() <= 1e-9 * base);
            }
        }
        let mut idx: Vec<usize> = picks.iter().map(|i| i.index(ci.centers.len())).collect();
        idx.sort_unstable();
        idx.dedup();
        for p in coverage_distance_profile(&ci, &idx).unwrap() {
            if p.covered {
                prop_assert!((p.distance - base).abs() <= 1e-9 * base);
            } else {
                prop_assert!(p.distance >= floor - 1e-9 && p.distance >= base - 1e-9);
            }
        }
    }

    #[test]
    fn cost_ignores_point_order(
        coords in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 2..10),
        rotate in 0usize..10, exponent in 1u32..=2, metric in prop::sample::select(vec![Metric::L1, Metric::L2, Metric::Lp(3.0)]),
    ) {
        let pts: Vec<LabeledPoint> = coords
            .iter()
            .enumerate()
            .map(|(i, c)| LabeledPoint { label: format!("p{i}"), coords: c.clone() })
            .collect();
        let mut shuffled = pts.clone();
        shuffled.rotate_left(rotate % pts.len());
        shuffled.swap(0, pts.len() - 1);
        let centers = vec![coords[0].clone(), coords[coords.len() / 2].clone()];
        let a = ClusteringInstance::new(pts, vec![], 2, metric, exponent, None).unwrap();
        let b = ClusteringInstance::new(shuffled, vec![], 2, metric, exponent, None).unwrap();
        let ca = clustering_cost(&a, &centers).unwrap().total;
        let cb = clustering_cost(&b, &centers).unwrap().total;
        prop_assert_eq!(ca, cb);
    }

    #[test]
    fn densify_is_simple(seed in any::<u64>(), b in 1u32..6, c in 1u64..300) {
        let pcp = single_edge(2);
        let hg = build_weighted_hypergraph(&pcp, &ratio(1, 4), BuildMode::Exact { budget: BUDGET }).unwrap();
        let d = densify(&hg, b, c, seed).unwrap();
        prop_assert!(d.is_simple());
        prop_assert_eq!(d.edges.len() as u64, d.replicas - d.removed_copies);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn geometric_median_beats_grid(coords in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..5)) {
        let pts: Vec<Vec<f64>> = coords.iter().map(|&(x, y)| vec![x, y]).collect();
        let sol = best_center_continuous(&pts, Metric::L2, 1).unwrap();
        let cost = |x: f64, y: f64| pts.iter().map(|p| ((p[0] - x).powi(2) + (p[1] - y).powi(2)).sqrt()).sum::<f64>();
        let mut grid = f64::INFINITY;
        for i in 0..=500 {
            for j in 0..=500 {
                grid = grid.min(cost(i as f64 / 500.0, j as f64 / 500.0));
            }
        }
        prop_assert!(sol.cost <= grid + 1e-4, "{} vs grid {}", sol.cost, grid);
    }

    #[test]
    fn exact_hypergraph_weights_sum_to_one(
        ell in 2u32..=3,
        sizes in prop::collection::vec(1u32..=2, 3),
        alphabets in prop::collection::vec(1u32..=3, 3),
        edge_seeds in prop::collection::vec(any::<u64>(), 0..5),
        num in 0i64..=4,
    ) {
        let pcp = random_pcp(ell, &sizes, &alphabets, &edge_seeds);
        let hg = build_weighted_hypergraph(&pcp, &ratio(num, 4), BuildMode::Exact { budget: BUDGET }).unwrap();
        prop_assert!(hg.triples.iter().all(|t| t.weight > num_rational::BigRational::zero()));
        // Layer pairs without PCP edges carry no triples.
        let pairs: std::collections::BTreeSet<(u32, u32)> = pcp.edges.iter().map(|e| (e.i, e.j)).collect();
        if pairs.len() as u32 == ell * (ell - 1) / 2 {
            prop_assert!(hg.total_weight().is_one());
        } else {
            prop_assert!(hg.total_weight() <= num_rational::BigRational::one());
        }
    }
}

fn to_f64_ratio(r: num_rational::Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn single_edge(sigma: u32) -> LayeredPcp {
    LayeredPcp::new(
        2,
        vec![1, 1],
        vec![sigma, sigma],
        vec![PcpEdge {
            i: 1,
            j: 2,
            vi: 0,
            vj: 0,
            projection: (0..sigma).collect(),
        }],
    )
    .unwrap()
}

/// Onto projections from a seed: the first `|Σi|` upper labels hit every lower label.
fn random_pcp(ell: u32, sizes: &[u32], alphabets: &[u32], seeds: &[u64]) -> LayeredPcp {
    let sizes = sizes[..ell as usize].to_vec();
    let mut alph = alphabets[..ell as usize].to_vec();
    for l in 1..alph.len() {
        alph[l] = alph[l].max(alph[l - 1]);
    }
    let mut edges = Vec::new();
    for &s in seeds {
        let i = 1 + (s % (ell as u64 - 1)) as u32;
        let j = i + 1 + ((s >> 8) % (ell - i) as u64) as u32;
        let vi = ((s >> 16) % sizes[i as usize - 1] as u64) as u32;
        let vj = ((s >> 24) % sizes[j as usize - 1] as u64) as u32;
        let (ai, aj) = (alph[i as usize - 1], alph[j as usize - 1]);
        let projection = (0..aj)
            .map(|b| {
                if b < ai {
                    b
                } else {
                    ((s >> (32 + b)) % ai as u64) as u32
                }
            })
            .collect();
        let e = PcpEdge {
            i,
            j,
            vi,
            vj,
            projection,
        };
        if !edges
            .iter()
            .any(|x: &PcpEdge| (x.i, x.j, x.vi, x.vj) == (e.i, e.j, e.vi, e.vj))
        {
            edges.push(e);
        }
    }
    LayeredPcp::new(ell, sizes, alph, edges).unwrap()
}

#[test]
fn complete_instance_cover_counts() {
    for n in 4..=9u32 {
        for z in 2..=4u32.min(n) {
            let inst = gen_instance(GenKind::Complete, n, z, z - 1, 1).unwrap();
            for s in all_subsets(1, n, (z - 1) as usize) {
                assert_eq!(cov(&s, &inst).unwrap().len() as u32, n - z + 1);
            }
        }
    }
}

#[test]
fn turan_product_range_and_rate() {
    for z in 4..=60 {
        let v = turan_random_uncovered(z).unwrap();
        assert!(v > num_rational::BigRational::zero() && v < num_rational::BigRational::one());
    }
    for z in [10u32, 20, 50] {
        let gap = (to_f64(&turan_random_uncovered(z).unwrap()).ln() + 1.0).abs();
        assert!(gap * z as f64 <= 2.0, "z={z} log gap {gap}");
    }
}

#[test]
fn codewords_agree_on_few_coordinates() {
    for q in [2u64, 3, 5, 7] {
        for eta in 1..=3u32.min(q as u32) {
            let code = RsCode::new(q, eta).unwrap();
            let words: Vec<Vec<u64>> = (0..code.message_count())
                .map(|m| code.encode_index(m).unwrap())
                .collect();
            for (a, wa) in words.iter().enumerate() {
                for wb in &words[a + 1..] {
                    let agree = wa.iter().zip(wb).filter(|(x, y)| x == y).count() as u32;
                    assert!(agree < eta);
                }
            }
            let d = verify_relative_distance(&code, DistanceMode::Exhaustive, BUDGET).unwrap();
            assert_eq!(d, code.relative_distance());
        }
    }
}

#[test]
fn sdp_construction_holds_for_small_n() {
    for n in 5..=10 {
        let inst = build_clique_gap_instance(n).unwrap();
        let check = verify_sdp_solution(&build_sdp_solution(&inst, 5).unwrap(), 1e-8).unwrap();
        assert!(check.max_residual <= 1e-8);
        assert_eq!(
            check.objective_exact,
            ratio(2 * binom(n as u64, 4) as i64, 1)
        );
        if n <= 8 {
            assert!(well_separated(&inst));
        }
    }
}

#[test]
fn integral_value_monotone_in_budget() {
    let inst = build_clique_gap_instance(6).unwrap();
    let mut prev = u64::MAX;
    for k in 0..=6 {
        let r = integral_min_uncovered(&inst, k, SearchMode::Exact { budget: BUDGET }).unwrap();
        assert!(r.exact && r.uncovered <= prev);
        prev = r.uncovered;
    }
    assert_eq!(prev, 0);
}
