//! `jchlab`: generate, reduce and certify coverage and clustering instances.
//!
//! Exit status: 0 success, 1 certification or convergence failure, 2 usage
//! or input error, 3 budget exceeded.

mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jchlab::Error;
use serde::Serialize;

use output::{render, Format};

#[derive(Parser, Serialize)]
#[command(
    name = "jchlab",
    version,
    about = "Johnson coverage reductions and clustering gap certificates"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Serialize)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on enumeration sizes; exceeding it exits with status 3.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub budget: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Artifact commands write the artifact here (report to stdout);
    /// report commands write the report here.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Generate a Johnson coverage instance.
    GenJc(GenJc),
    /// Solve a coverage instance exactly.
    SolveJc(SolveJc),
    /// Export a gap realization as a vector table.
    Embed(EmbedArgs),
    /// Certify a gap realization by exhaustive pair enumeration.
    VerifyEmbed(VerifyEmbed),
    /// Reduce a coverage instance to a clustering point set.
    Reduce(Reduce),
    /// Clustering cost of a chosen center set.
    Cost(Cost),
    /// Exact optimum of a small clustering instance.
    BruteOpt(BruteOpt),
    /// Relaxation gap report for the 4-clique instances.
    SdpGap(SdpGap),
    /// Weighted 3-hypergraph from a layered PCP.
    HvcBuild(HvcBuild),
    /// Replicate a weighted hypergraph into a simple unweighted one.
    Densify(Densify),
    /// Hardness factors from the gadget gap.
    Factors(Factors),
    /// Random-cover product for arity z.
    Turan(Turan),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Complete,
    Random,
}

#[derive(Args, Serialize)]
pub struct GenJc {
    #[arg(long, value_enum)]
    pub kind: InstanceKind,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub z: u32,
    #[arg(long)]
    pub y: u32,
    #[arg(long)]
    pub k: u32,
    /// Edge count for `--kind random`.
    #[arg(long, required_if_eq("kind", "random"))]
    pub m: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    Brute,
    Fpt,
}

#[derive(Args, Serialize)]
pub struct SolveJc {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = SolveMethod::Brute)]
    pub method: SolveMethod,
    /// Override the instance's budget k.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gadget {
    Indicator,
    Scaled,
    HalfShift,
}

#[derive(Args, Serialize)]
pub struct Realization {
    /// l0, l1, l2 or lp<p> (e.g. lp4).
    #[arg(long)]
    pub metric: jchlab::Metric,
    /// Default: indicator for l0/l1, scaled for l2, half-shift otherwise.
    #[arg(long, value_enum)]
    pub gadget: Option<Gadget>,
}

#[derive(Args, Serialize)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub real: Realization,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub t: u32,
    /// Small-set size; half-shift requires t − 1.
    #[arg(long)]
    pub s: Option<u32>,
}

#[derive(Args, Serialize)]
pub struct VerifyEmbed {
    #[command(flatten)]
    pub embed: EmbedArgs,
    /// Restrict the big side to this many seeded random t-sets.
    #[arg(long)]
    pub sample: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReduceMode {
    Discrete,
    Continuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    All,
    EdgeSubsets,
}

#[derive(Args, Serialize)]
pub struct Reduce {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReduceMode::Discrete)]
    pub mode: ReduceMode,
    #[command(flatten)]
    pub real: Realization,
    /// 1 for k-median, 2 for k-means.
    #[arg(long, default_value_t = 1)]
    pub exponent: u32,
    /// Accuracy parameter for the field-size rule.
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Use the desk-scale field-size rule.
    #[arg(long)]
    pub relaxed: bool,
    /// Use this prime field instead of either rule.
    #[arg(long, conflicts_with = "relaxed")]
    pub q: Option<u64>,
    #[arg(long, value_enum, default_value_t = Scope::All)]
    pub scope: Scope,
}

#[derive(Args, Serialize)]
pub struct Cost {
    #[arg(long)]
    pub input: PathBuf,
    /// Center label, looked up among candidate centers and then points; repeatable.
    #[arg(long = "center", required = true)]
    pub centers: Vec<String>,
    /// Include the per-point assignment.
    #[arg(long)]
    pub per_point: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptModeArg {
    Discrete,
    Continuous,
}

#[derive(Args, Serialize)]
pub struct BruteOpt {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = OptModeArg::Discrete)]
    pub mode: OptModeArg,
}

#[derive(Args, Serialize)]
pub struct SdpGap {
    /// Clique-instance sizes; comma-separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = jchlab::relax::DEFAULT_T)]
    pub t: u32,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also sweep 10% and 20% extra integral centers.
    #[arg(long)]
    pub extra_centers: bool,
    /// Fall back to seeded local search when exact search exceeds the budget.
    #[arg(long)]
    pub heuristic: bool,
}

#[derive(Args, Serialize)]
pub struct HvcBuild {
    #[arg(long)]
    pub pcp: PathBuf,
    /// Noise rate as a rational, e.g. 1/8.
    #[arg(long)]
    pub delta: String,
    /// Monte Carlo sample count; exact enumeration when absent.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Labeling (`sigma` file) whose completeness cover is checked.
    #[arg(long)]
    pub assignment: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct Densify {
    /// Weighted hypergraph (`whg3`).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub c: u64,
    /// Check that the cover from this labeling still hits every edge.
    #[arg(long, requires = "pcp")]
    pub assignment: Option<PathBuf>,
    #[arg(long)]
    pub pcp: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct Factors {
    /// 1, 2 or inf.
    #[arg(long)]
    pub p: String,
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    /// Soundness; a decimal, a fraction such as 7/8, or `1-1/e` (default).
    #[arg(long, default_value = "1-1/e")]
    pub alpha: String,
}

#[derive(Args, Serialize)]
pub struct Turan {
    #[arg(long)]
    pub z: u32,
}

fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Certification { .. } | Error::Convergence(_) => 1,
        Error::Budget { .. } => 3,
        Error::Invalid(_) | Error::Unsupported(_) | Error::Parse { .. } | Error::Io(_) => 2,
    }
}

fn configure_threads() -> jchlab::Result<()> {
    if let Ok(v) = std::env::var("JCHLAB_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
            Error::Invalid(format!(
                "JCHLAB_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Invalid(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> jchlab::Result<()> {
    configure_threads()?;
    let mut out = commands::dispatch(cli)?;
    out.records.insert(
        0,
        (
            "config",
            serde_json::to_value(cli).expect("config serializes"),
        ),
    );
    let report = render(&out.records, cli.global.format);
    match (&out.artifact, &cli.global.output) {
        (Some(artifact), Some(path)) => {
            fs::write(path, artifact)?;
            std::io::stdout().write_all(report.as_bytes())?;
        }
        (Some(artifact), None) => {
            std::io::stdout().write_all(artifact)?;
            std::io::stderr().write_all(report.as_bytes())?;
        }
        (None, Some(path)) => fs::write(path, report)?,
        (None, None) => std::io::stdout().write_all(report.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}
