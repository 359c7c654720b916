//! Command-line front end: argument parsing, configuration, JSON I/O and suites.

pub mod config;
pub mod parse;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use opconvex::certify::{self, Direction, MapSpec, RunOptions, Slot};
use opconvex::domain::{build_ak, domain_contains};
use opconvex::hessian::{generalized_hessian, hessian_scan, GridJson, ScanMode};
use opconvex::json::{matrix_to_value, MatrixJson};
use opconvex::means::{self, ProbeConfig};
use opconvex::{DataSetGrid, DomainSpec, FunctionSpec, HermitianMatrix, Tolerances};

use config::FileConfig;
pub use report::{emit_report, CheckResult, CheckVerdict, Report, SuiteResult};
pub use suites::{run_suite, SuiteName};

#[derive(Parser, Debug)]
#[command(name = "opconvex", version, about = "Operator convexity laboratory")]
pub struct Cli {
    /// JSON file with default values for any flag (flags win).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an acceptance battery and write the consolidated report.
    Suite(SuiteArgs),
    /// Randomized midpoint certification of one map.
    Certify(CertifyArgs),
    /// Concavity of tr A^p K* B^q K over a grid of exponents.
    Sweep(SweepArgs),
    /// Semi-definiteness scan of generalized Hessians over a data-set grid.
    Hessian(HessianArgs),
    /// Membership in the concavity domain of a fraction product.
    Domain(DomainArgs),
    /// Matrix means of two positive definite matrices.
    Means(MeansArgs),
    /// Reproduce a fixed counterexample.
    Repro(ReproArgs),
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(value_enum)]
    pub name: SuiteName,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetArg {
    Tensor,
    Trace,
    Quadratic,
    Integral,
    TwoOfThree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Convex,
    Concave,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    /// `pow:0.5,0.5`, `frac:1,1`, `recip:1,1` or `resolvent:beta=0;s=1,2;w=1,1`.
    #[arg(long)]
    pub function: Option<String>,
    /// Matrix sizes, e.g. `3x3`.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Claimed direction; defaults to concave for tensor/trace targets, convex otherwise.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Eigenvalue windows `lo:hi[,lo:hi...]`.
    #[arg(long)]
    pub window: Option<String>,
    /// Frozen argument (A, B or K) of the integral and two-of-three maps.
    #[arg(long)]
    pub fixed: Option<String>,
    /// Shifts `u,v` of the two-of-three map.
    #[arg(long)]
    pub shifts: Option<String>,
    /// Scalar-seeded search that stops at the first violation.
    #[arg(long)]
    pub search: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// `p=lo:hi:step,q=lo:hi:step`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HessianArgs {
    #[arg(long)]
    pub function: Option<String>,
    /// Grid JSON file `{"nodes": [[...], ...]}`.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// `psd` or `nsd`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Also print the Hessian at this zero-based multi-index, e.g. `0,1`.
    #[arg(long)]
    pub index: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DomainArgs {
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeansOp {
    Geometric,
    Harmonic,
    HarmonicCheck,
    Probe,
}

#[derive(Args, Debug)]
pub struct MeansArgs {
    #[arg(long, value_enum)]
    pub op: Option<MeansOp>,
    /// Matrix JSON file for A.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Matrix JSON file for B.
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReproName {
    T2,
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub name: ReproName,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Caps rayon's global pool at `OPCONVEX_THREADS` when set.
fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("OPCONVEX_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("OPCONVEX_THREADS=`{v}` is not a thread count"))?;
        if n > 0 {
            // A second initialization (e.g. repeated runs in one process) keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    Ok(())
}

fn write_json(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_hermitian(path: &Path) -> Result<HermitianMatrix> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let j: MatrixJson =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(j.to_hermitian(Tolerances::<f64>::default().hermiticity)?)
}

fn function(cfg: &FileConfig, flag: Option<String>) -> Result<FunctionSpec> {
    let text: String = cfg
        .pick_opt(flag, "function")?
        .context("--function is required")?;
    Ok(text.parse()?)
}

fn pair(v: &[usize]) -> Result<(usize, usize)> {
    match v {
        [n, m] => Ok((*n, *m)),
        _ => bail!("expected two dimensions like 3x3, got {v:?}"),
    }
}

fn certify_cmd(cfg: &FileConfig, a: CertifyArgs) -> Result<i32> {
    let target = cfg.pick(a.target, "target", TargetArg::Trace)?;
    let trials = cfg.pick(a.trials, "trials", 1000)?;
    let seed = cfg.pick(a.seed, "seed", 0)?;
    let search = a.search || cfg.get("search")?.unwrap_or(false);
    let dims = parse::dims(&cfg.pick(a.dims, "dims", "3x3".to_string())?)?;
    let fixed: Option<Slot> = cfg
        .pick_opt(a.fixed, "fixed")?
        .map(|s: String| s.parse())
        .transpose()?;
    let window: Option<String> = cfg.pick_opt(a.window, "window")?;
    let default_direction = match target {
        TargetArg::Tensor | TargetArg::Trace => DirectionArg::Concave,
        _ => DirectionArg::Convex,
    };
    let direction = match cfg.pick(a.direction, "direction", default_direction)? {
        DirectionArg::Convex => Direction::Convex,
        DirectionArg::Concave => Direction::Concave,
    };

    let mut spec = match target {
        TargetArg::Tensor => MapSpec::tensor(
            function(cfg, a.function)?,
            direction,
            dims,
            certify::DEFAULT_WINDOW,
        ),
        TargetArg::Trace => MapSpec::trace(
            function(cfg, a.function)?,
            direction,
            pair(&dims)?,
            certify::DEFAULT_WINDOW,
        ),
        TargetArg::Quadratic => {
            let [n] = dims[..] else {
                bail!("quadratic target takes one dimension")
            };
            MapSpec::quadratic(function(cfg, a.function)?, n, certify::DEFAULT_WINDOW)
        }
        TargetArg::Integral => MapSpec::integral(
            certify::quadrature::default_quadrature(),
            pair(&dims)?,
            certify::DEFAULT_WINDOW,
        )
        .with_fixed(fixed),
        TargetArg::TwoOfThree => {
            let shifts = parse::list(&cfg.pick(a.shifts, "shifts", "1,1".to_string())?)?;
            let [u, v] = shifts[..] else {
                bail!("--shifts takes u,v")
            };
            MapSpec::two_of_three(fixed, u, v, pair(&dims)?, certify::DEFAULT_WINDOW)
        }
    };
    spec.direction = direction;
    if let Some(w) = window {
        spec.windows = parse::windows(&w, spec.windows.len())?;
    }
    let opts = if search {
        RunOptions::search(trials, seed)
    } else {
        RunOptions::new(trials, seed)
    };
    let report = certify::certify(&spec, &opts)?;
    write_json(
        &serde_json::to_value(&report)?,
        cfg.pick_opt(a.out, "out")?.as_deref(),
    )?;
    Ok(0)
}

fn sweep_cmd(cfg: &FileConfig, a: SweepArgs) -> Result<i32> {
    let (ps, qs) =
        parse::sweep_grid(&cfg.pick(a.grid, "grid", "p=0:1.4:0.1,q=0:1.4:0.1".to_string())?)?;
    let dims = pair(&parse::dims(&cfg.pick(
        a.dims,
        "dims",
        "3x3".to_string(),
    )?)?)?;
    let trials = cfg.pick(a.trials, "trials", 200)?;
    let seed = cfg.pick(a.seed, "seed", 0)?;
    let cells = certify::lieb_sweep(&ps, &qs, dims, &RunOptions::search(trials, seed))?;
    let rows: Vec<_> = cells
        .iter()
        .map(|c| {
            json!({
                "p": c.p,
                "q": c.q,
                "verdict": c.report.verdict,
                "trials": c.report.trials,
                "worst_margin": c.report.worst_margin,
                "worst_relative_margin": c.report.worst_relative_margin,
            })
        })
        .collect();
    let value = json!({ "seed": seed, "dims": [dims.0, dims.1], "trials_per_stage": trials, "cells": rows });
    write_json(&value, cfg.pick_opt(a.out, "out")?.as_deref())?;
    Ok(0)
}

fn hessian_cmd(cfg: &FileConfig, a: HessianArgs) -> Result<i32> {
    let f = function(cfg, a.function)?;
    let grid_path: PathBuf = cfg
        .pick_opt(a.grid, "grid")?
        .context("--grid is required")?;
    let text = std::fs::read_to_string(&grid_path)
        .with_context(|| format!("reading {}", grid_path.display()))?;
    let grid_json: GridJson =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", grid_path.display()))?;
    let grid = DataSetGrid::try_from(grid_json)?;
    let mode: ScanMode = cfg.pick(a.mode, "mode", "psd".to_string())?.parse()?;
    let report = hessian_scan(&f, &grid, mode)?;
    let mut value = serde_json::to_value(&report)?;
    if let Some(index) = cfg.pick_opt::<String>(a.index, "index")? {
        let index: Vec<usize> = index
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad index `{s}`"))
            })
            .collect::<Result<_>>()?;
        let h = generalized_hessian(&f, &grid, &index)?;
        value["hessian"] = serde_json::to_value(opconvex::hessian::HessianJson::from(&h))?;
    }
    write_json(&value, cfg.pick_opt(a.out, "out")?.as_deref())?;
    Ok(0)
}

fn domain_cmd(cfg: &FileConfig, a: DomainArgs) -> Result<i32> {
    let mu = parse::list(
        &cfg.pick_opt::<String>(a.mu, "mu")?
            .context("--mu is required")?,
    )?;
    let point = parse::list(
        &cfg.pick_opt::<String>(a.point, "point")?
            .context("--point is required")?,
    )?;
    let d = DomainSpec::new(mu)?;
    let m = domain_contains(&d, &point)?;
    let value = json!({ "member": m.member, "margin": m.margin, "A_k": matrix_to_value(build_ak(&d, &point)?.matrix()) });
    write_json(&value, cfg.pick_opt(a.out, "out")?.as_deref())?;
    Ok(0)
}

fn means_cmd(cfg: &FileConfig, a: MeansArgs) -> Result<i32> {
    let op = cfg.pick(a.op, "op", MeansOp::Geometric)?;
    let pa: PathBuf = cfg.pick_opt(a.a, "a")?.context("--a is required")?;
    let pb: PathBuf = cfg.pick_opt(a.b, "b")?.context("--b is required")?;
    let (ma, mb) = (read_hermitian(&pa)?, read_hermitian(&pb)?);
    let value = match op {
        MeansOp::Geometric => matrix_to_value(means::geometric_mean(&ma, &mb)?.matrix()),
        MeansOp::Harmonic => matrix_to_value(means::harmonic_mean(&ma, &mb)?.matrix()),
        MeansOp::HarmonicCheck => serde_json::to_value(means::harmonic_block_check(&ma, &mb)?)?,
        MeansOp::Probe => {
            let probe = ProbeConfig {
                trials: cfg.pick(a.trials, "trials", 1000)?,
                seed: cfg.pick(a.seed, "seed", 0)?,
                delta: cfg.pick(a.delta, "delta", 0.05)?,
                ..Default::default()
            };
            serde_json::to_value(means::gm_maximality_probe(&ma, &mb, &probe)?)?
        }
    };
    write_json(&value, cfg.pick_opt(a.out, "out")?.as_deref())?;
    Ok(0)
}

fn repro_cmd(cfg: &FileConfig, a: ReproArgs) -> Result<i32> {
    let value = match a.name {
        ReproName::T2 => {
            let eps = cfg.pick(a.eps, "eps", 0.0)?;
            json!({ "id": "t2_counterexample", "eps": eps, "value": certify::t2_counterexample(eps)? })
        }
    };
    write_json(&value, cfg.pick_opt(a.out, "out")?.as_deref())?;
    Ok(0)
}

fn suite_cmd(cfg: &FileConfig, a: SuiteArgs) -> Result<i32> {
    let seed = cfg.pick(a.seed, "seed", 0)?;
    let report = Report::new(seed, run_suite(a.name, seed));
    for suite in &report.suites {
        for c in &suite.checks {
            eprintln!(
                "{:>4}  {}/{}  margin {:.3e}",
                format!("{:?}", c.verdict).to_uppercase(),
                suite.name,
                c.id,
                c.margin
            );
        }
    }
    write_json(
        &emit_report(&report),
        cfg.pick_opt(a.out, "out")?.as_deref(),
    )?;
    Ok(if report.passed() { 0 } else { 1 })
}

pub fn execute(cli: Cli) -> Result<i32> {
    init_threads()?;
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Suite(a) => suite_cmd(&cfg, a),
        Command::Certify(a) => certify_cmd(&cfg, a),
        Command::Sweep(a) => sweep_cmd(&cfg, a),
        Command::Hessian(a) => hessian_cmd(&cfg, a),
        Command::Domain(a) => domain_cmd(&cfg, a),
        Command::Means(a) => means_cmd(&cfg, a),
        Command::Repro(a) => repro_cmd(&cfg, a),
    }
}

/// Parses `args` and runs the command; returns the process exit code
/// (0 success, 1 failed contract or runtime error, 2 usage error).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
