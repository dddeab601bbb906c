//! One handler per subcommand. Each returns report records tagged with the
//! provenance of their numbers, plus an artifact when the command makes one.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::str::FromStr;

use jchlab::codes::{pick_code_params, pick_code_params_relaxed, pick_code_params_with_field};
use jchlab::embed::{
    embed_indicator, embed_l2_scaled, embed_lp_halfshift, export_text, verify_gap_realization,
    GapRealization,
};
use jchlab::factors::{
    inapprox_factors, inapprox_factors_l1_exact, turan_random_uncovered, FactorMetric,
};
use jchlab::hvc::{
    build_weighted_hypergraph, completeness_cover_check, densify, in_cover, BuildMode,
};
use jchlab::io;
use jchlab::johnson::{brute_force_max_coverage, fpt_cover_decide, gen_instance, GenKind};
use jchlab::reduce::{
    brute_force_optimal_cost, build_continuous_indicator_instance, build_discrete_instance,
    clustering_cost, CenterScope, ClusteringInstance, OptMode,
};
use jchlab::relax::{gap_report, GapOptions};
use jchlab::report::to_f64;
use jchlab::{Error, Metric, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::output::Output;
use crate::{
    Cli, Command, Gadget, InstanceKind, OptModeArg, Realization, ReduceMode, Scope, SolveMethod,
};

pub fn dispatch(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::GenJc(a) => gen_jc(a, g.seed),
        Command::SolveJc(a) => solve_jc(a, g.budget),
        Command::Embed(a) => embed(a),
        Command::VerifyEmbed(a) => verify_embed(a, g.seed, g.budget),
        Command::Reduce(a) => reduce(a, g.budget),
        Command::Cost(a) => cost(a),
        Command::BruteOpt(a) => brute_opt(a, g.budget),
        Command::SdpGap(a) => sdp_gap(a, g.seed, g.budget),
        Command::HvcBuild(a) => hvc_build(a, g.seed, g.budget),
        Command::Densify(a) => densify_cmd(a, g.seed),
        Command::Factors(a) => factors(a),
        Command::Turan(a) => turan(a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn tagged(value: impl serde::Serialize, provenance: &str) -> Value {
    let mut v = serde_json::to_value(value).expect("report types serialize to JSON");
    if let Value::Object(map) = &mut v {
        map.insert("provenance".into(), provenance.into());
    }
    v
}

fn gen_jc(a: &crate::GenJc, seed: u64) -> Result<Output> {
    let kind = match a.kind {
        InstanceKind::Complete => GenKind::Complete,
        InstanceKind::Random => GenKind::Random {
            m: a.m.expect("clap requires --m for random"),
            seed,
        },
    };
    let inst = gen_instance(kind, a.n, a.z, a.y, a.k)?;
    let mut buf = Vec::new();
    io::write_jc(&inst, &mut buf)?;
    let mut out = Output::default();
    out.record(
        "result",
        json!({
            "edges": inst.edges().len(),
            "density_ratio": inst.density_ratio(),
            "provenance": if a.kind == InstanceKind::Complete { "complete-hypergraph" } else { "seeded-sample" },
        }),
    );
    out.artifact = Some(buf);
    Ok(out)
}

fn solve_jc(a: &crate::SolveJc, budget: u128) -> Result<Output> {
    let mut inst = io::read_jc(open(&a.input)?)?;
    if let Some(k) = a.k {
        inst = inst.with_budget(k);
    }
    let mut out = Output::default();
    match a.method {
        SolveMethod::Brute => {
            let (cover, report) = brute_force_max_coverage(&inst, budget)?;
            let mut v = tagged(&report, "brute-force");
            v["witness"] = json!(cover
                .sets()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>());
            out.record("result", v);
        }
        SolveMethod::Fpt => out.record(
            "result",
            tagged(fpt_cover_decide(&inst)?, "branching-search"),
        ),
    }
    Ok(out)
}

fn realization(r: &Realization, q: u32, t: u32, s: Option<u32>) -> Result<GapRealization> {
    let gadget = r.gadget.unwrap_or(match r.metric {
        Metric::L0 | Metric::L1 => Gadget::Indicator,
        Metric::L2 => Gadget::Scaled,
        Metric::Lp(_) => Gadget::HalfShift,
    });
    let need_s = || s.ok_or_else(|| Error::Invalid("--s is required for this gadget".into()));
    match gadget {
        Gadget::Indicator => embed_indicator(r.metric, q, t, need_s()?),
        Gadget::Scaled if r.metric == Metric::L2 => embed_l2_scaled(q, t, need_s()?),
        Gadget::Scaled => Err(Error::Invalid(format!(
            "the scaled gadget is an l2 construction, got {}",
            r.metric
        ))),
        Gadget::HalfShift => {
            if let Some(s) = s.filter(|&s| s + 1 != t) {
                return Err(Error::Invalid(format!(
                    "half-shift needs s = t - 1, got t={t} s={s}"
                )));
            }
            embed_lp_halfshift(q, t, r.metric.p())
        }
    }
}

fn embed(a: &crate::EmbedArgs) -> Result<Output> {
    let real = realization(&a.real, a.q, a.t, a.s)?;
    let mut buf = Vec::new();
    export_text(&real, &mut buf)?;
    let mut out = Output::default();
    out.record("result", tagged(&real, "closed-form"));
    out.artifact = Some(buf);
    Ok(out)
}

fn verify_embed(a: &crate::VerifyEmbed, seed: u64, budget: u128) -> Result<Output> {
    let e = &a.embed;
    let real = realization(&e.real, e.q, e.t, e.s)?;
    let sample = match a.sample {
        Some(m) => Some(
            gen_instance(GenKind::Random { m, seed }, real.q, real.t, real.s, 1)?
                .edges()
                .to_vec(),
        ),
        None => None,
    };
    let report = verify_gap_realization(&real, sample.as_deref(), budget)?;
    let provenance = if sample.is_some() {
        "exhaustive-over-sample"
    } else {
        "exhaustive"
    };
    let mut out = Output::default();
    out.record("result", tagged(report, provenance));
    Ok(out)
}

fn reduce(a: &crate::Reduce, budget: u128) -> Result<Output> {
    let inst = io::read_jc(open(&a.input)?)?;
    let mut out = Output::default();
    let ci = match a.mode {
        ReduceMode::Discrete => {
            let (n, z, y) = (inst.n() as u64, inst.z(), inst.y());
            let choice = match a.q {
                Some(q) => pick_code_params_with_field(n, z, y, q)?,
                None if a.relaxed => pick_code_params_relaxed(n, z, y, a.eps)?,
                None => pick_code_params(n, z, y, a.eps)?,
            };
            let q = u32::try_from(choice.code.q()).map_err(|_| Error::Budget {
                what: "field size".into(),
                needed: choice.code.q() as u128,
                budget,
            })?;
            let real = realization(&a.real, q, z, Some(y))?;
            let scope = match a.scope {
                Scope::All => CenterScope::All,
                Scope::EdgeSubsets => CenterScope::EdgeSubsets,
            };
            out.record("code", tagged(&choice, "closed-form"));
            out.record("realization", tagged(&real, "closed-form"));
            build_discrete_instance(&inst, &choice.code, &real, scope, a.exponent, budget)?
        }
        ReduceMode::Continuous => {
            build_continuous_indicator_instance(&inst, a.real.metric, a.exponent)?
        }
    };
    let mut v = json!({
        "points": ci.points.len(),
        "centers": ci.centers.len(),
        "dim": ci.dim(),
        "k": ci.k,
        "metric": ci.metric,
        "exponent": ci.exponent,
        "provenance": "construction",
    });
    if let Some(m) = &ci.meta {
        v["base_distance"] = json!(m.base_distance());
        v["soundness_floor"] = json!(m.soundness_floor());
    }
    out.record("result", v);
    let mut buf = Vec::new();
    io::write_pts(&ci, &mut buf)?;
    out.artifact = Some(buf);
    Ok(out)
}

fn lookup(ci: &ClusteringInstance, label: &str) -> Result<Vec<f64>> {
    ci.centers
        .iter()
        .chain(&ci.points)
        .find(|p| p.label == label)
        .map(|p| p.coords.clone())
        .ok_or_else(|| Error::Invalid(format!("no center or point labeled {label}")))
}

fn cost(a: &crate::Cost) -> Result<Output> {
    let ci = io::read_pts(open(&a.input)?)?;
    let chosen = a
        .centers
        .iter()
        .map(|l| lookup(&ci, l))
        .collect::<Result<Vec<_>>>()?;
    let breakdown = clustering_cost(&ci, &chosen)?;
    let mut v = tagged(&breakdown, "direct-evaluation");
    if !a.per_point {
        v.as_object_mut().expect("object").remove("per_point");
    }
    if let Some(m) = &ci.meta {
        v["base_distance"] = json!(m.base_distance());
        v["soundness_floor"] = json!(m.soundness_floor());
    }
    let mut out = Output::default();
    out.record("result", v);
    Ok(out)
}

fn brute_opt(a: &crate::BruteOpt, budget: u128) -> Result<Output> {
    let ci = io::read_pts(open(&a.input)?)?;
    let mode = match a.mode {
        OptModeArg::Discrete => OptMode::Discrete,
        OptModeArg::Continuous => OptMode::Continuous,
    };
    let sol = brute_force_optimal_cost(&ci, mode, budget)?;
    let provenance = if sol.heuristic {
        "brute-force-partitions-heuristic-centers"
    } else {
        "brute-force"
    };
    let mut out = Output::default();
    out.record("result", tagged(sol, provenance));
    Ok(out)
}

fn sdp_gap(a: &crate::SdpGap, seed: u64, budget: u128) -> Result<Output> {
    let opts = GapOptions {
        t: a.t,
        tol: a.tol,
        budget,
        extra_centers: a.extra_centers,
        heuristic: a.heuristic,
        seed,
    };
    let report = gap_report(&a.n, &opts)?;
    let mut out = Output::default();
    out.record(
        "provenance",
        json!({
            "density_fraction": "formula",
            "asymptotic_gap": "formula",
            "random_cover_fraction": "exact-product",
            "sdp": "verified-construction",
            "lp": "exact-rational",
            "integral": "per-row",
        }),
    );
    out.record("result", report);
    Ok(out)
}

fn parse_rational(text: &str, what: &str) -> Result<BigRational> {
    BigRational::from_str(text.trim()).map_err(|_| {
        Error::Invalid(format!(
            "{what} must be an integer or fraction a/b, got {text:?}"
        ))
    })
}

fn hvc_build(a: &crate::HvcBuild, seed: u64, budget: u128) -> Result<Output> {
    let pcp = io::read_pcp(open(&a.pcp)?)?;
    let delta = parse_rational(&a.delta, "--delta")?;
    let mode = match a.samples {
        Some(samples) => BuildMode::MonteCarlo { samples, seed },
        None => BuildMode::Exact { budget },
    };
    let hg = build_weighted_hypergraph(&pcp, &delta, mode)?;
    let mut out = Output::default();
    out.record(
        "result",
        json!({
            "triples": hg.len(),
            "total_weight": hg.total_weight().to_string(),
            "provenance": if hg.sampled { "monte-carlo" } else { "exact-enumeration" },
        }),
    );
    if let Some(path) = &a.assignment {
        let sigma = io::read_assignment(open(path)?, &pcp)?;
        let report = completeness_cover_check(&pcp, &hg, &sigma)?;
        if report.assignment_satisfies && !report.all_hit {
            return Err(Error::Certification {
                reason: "a satisfying labeling's cover misses a triple".into(),
                witness: format!("{:?}", report.witness.map(|t| t.map(|v| v.to_string()))),
            });
        }
        out.record("completeness", tagged(report, "exhaustive-scan"));
    }
    let mut buf = Vec::new();
    io::write_whg3(&hg, &mut buf)?;
    out.artifact = Some(buf);
    Ok(out)
}

fn densify_cmd(a: &crate::Densify, seed: u64) -> Result<Output> {
    let hg = io::read_whg3(open(&a.input)?)?;
    let d = densify(&hg, a.b, a.c, seed)?;
    let mut out = Output::default();
    out.record(
        "result",
        json!({
            "input_triples": d.m,
            "replicas": d.replicas,
            "removed_triples": d.removed_triples,
            "removed_copies": d.removed_copies,
            "edges": d.edges.len(),
            "retained_bound": d.retained_bound,
            "meets_retained_bound": d.meets_retained_bound(),
            "simple": d.is_simple(),
            "provenance": "seeded-sampling",
        }),
    );
    if let (Some(sigma_path), Some(pcp_path)) = (&a.assignment, &a.pcp) {
        let pcp = io::read_pcp(open(pcp_path)?)?;
        let sigma = io::read_assignment(open(sigma_path)?, &pcp)?;
        let input = completeness_cover_check(&pcp, &hg, &sigma)?;
        let lifted = d.all_hit_by(|v| in_cover(&sigma, v));
        if input.all_hit && !lifted {
            return Err(Error::Certification {
                reason: "lifted cover misses a replicated triple".into(),
                witness: format!("seed {seed}"),
            });
        }
        out.record(
            "cover_transfer",
            json!({ "input_all_hit": input.all_hit, "output_all_hit": lifted, "provenance": "exhaustive-scan" }),
        );
    }
    let mut buf = Vec::new();
    io::write_hg3(&d, &mut buf)?;
    out.artifact = Some(buf);
    Ok(out)
}

fn factors(a: &crate::Factors) -> Result<Output> {
    let metric = match a.p.as_str() {
        "1" => FactorMetric::L1,
        "2" => FactorMetric::L2,
        "inf" => FactorMetric::LimitInfinity,
        other => {
            return Err(Error::Unsupported(format!(
                "closed-form factors exist for p in {{1, 2, inf}}, got {other}; certify other p with verify-embed"
            )))
        }
    };
    let (alpha, exact_alpha) = match a.alpha.trim() {
        "1-1/e" => (1.0 - (-1f64).exp(), None),
        t if t.contains('/') => {
            let r = parse_rational(t, "--alpha")?;
            (to_f64(&r), Some(r))
        }
        t => (
            t.parse::<f64>().map_err(|_| {
                Error::Invalid(format!(
                    "--alpha must be a number, fraction or 1-1/e, got {t:?}"
                ))
            })?,
            None,
        ),
    };
    let table = inapprox_factors(metric, a.delta, alpha)?;
    let mut v = tagged(&table, "closed-form");
    if let (Some(r), FactorMetric::L1) = (&exact_alpha, metric) {
        v["exact"] =
            serde_json::to_value(inapprox_factors_l1_exact(a.delta, r)?).expect("serializes");
    }
    let mut out = Output::default();
    out.record("result", v);
    Ok(out)
}

fn turan(a: &crate::Turan) -> Result<Output> {
    let value = turan_random_uncovered(a.z)?;
    let decimal = to_f64(&value);
    let limit = (-1f64).exp();
    let mut out = Output::default();
    out.record(
        "result",
        json!({
            "z": a.z,
            "value": value.to_string(),
            "decimal": decimal,
            "distance_to_inverse_e": (decimal - limit).abs(),
            "provenance": "exact-product",
        }),
    );
    Ok(out)
}
