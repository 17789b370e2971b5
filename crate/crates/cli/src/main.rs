//! Command-line surface for the beta-Hermite / Tracy-Widom toolkit.
//!
//! Subcommands: `sample` (seeded scaled-eigenvalue batches), `cdf`
//! (tabulated F1/F2/F4), `tails` (closed-form tail exponents), `idcheck`
//! (infinite-divisibility diagnostics) and `verify` (the self-check
//! suite).
//!
//! Exit codes: 0 success, 1 verify-check failure, 2 usage error,
//! 3 runtime/infrastructure error.

mod config;

use anyhow::{anyhow, Context, Result};
use betatw_core::ensembles::EnsembleSpec;
use betatw_core::montecarlo::{run_batch, SampleBatch};
use betatw_core::painleve::{
    solve_hastings_mcleod, tw_cdf, tw_range, PainleveSolution, TwBeta, DEFAULT_STEP,
};
use betatw_core::tails::{
    check_exponential_bound, classify_id, tail_asymptote, ClassifyOptions, Side, TailFunction,
};
use betatw_core::verify::{run_all_with, VerifyScale};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{resolve, FileConfig};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "betatw", version, about = "beta-Hermite ensembles and Tracy-Widom numerics")]
struct Cli {
    /// Worker threads (0 = auto). Thread count never affects results.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Flat `key = value` configuration file; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a seeded batch of scaled largest-eigenvalue samples.
    Sample(SampleArgs),
    /// Tabulate the Tracy-Widom distribution functions F1, F2, F4.
    Cdf(CdfArgs),
    /// Evaluate the closed-form tail asymptotics.
    Tails(TailsArgs),
    /// Run the infinite-divisibility diagnostics.
    Idcheck(IdcheckArgs),
    /// Run the self-verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnsembleKind {
    BetaHermite,
    GoeDense,
    Sao,
}

impl FromStr for EnsembleKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "beta-hermite" => Ok(Self::BetaHermite),
            "goe-dense" => Ok(Self::GoeDense),
            "sao" => Ok(Self::Sao),
            other => Err(format!("expected beta-hermite, goe-dense or sao, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("expected csv or json, got {other:?}")),
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    /// Ensemble to sample.
    #[arg(long, value_enum)]
    ensemble: Option<EnsembleKind>,
    /// Dyson index beta (beta-hermite and sao kinds).
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Matrix dimension N.
    #[arg(long)]
    n_dim: Option<usize>,
    /// Number of samples.
    #[arg(long)]
    count: Option<usize>,
    /// Master seed; per-sample substreams derive from (seed, index).
    #[arg(long)]
    seed: Option<u64>,
    /// Stochastic Airy domain length L.
    #[arg(long)]
    sao_length: Option<f64>,
    /// Stochastic Airy grid step h.
    #[arg(long)]
    sao_step: Option<f64>,
    /// Output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct CdfArgs {
    /// Left end of the tabulation grid.
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    /// Right end of the tabulation grid.
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    /// Grid spacing.
    #[arg(long)]
    x_step: Option<f64>,
    /// Painleve solver range, left end.
    #[arg(long, allow_negative_numbers = true)]
    s_min: Option<f64>,
    /// Painleve solver range, right end.
    #[arg(long, allow_negative_numbers = true)]
    s_max: Option<f64>,
    /// Painleve solver step.
    #[arg(long)]
    ode_step: Option<f64>,
    /// Output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the raw solver tables (s, q, qprime, i1, i2, i2w).
    #[arg(long)]
    snapshot_out: Option<PathBuf>,
}

#[derive(Args)]
struct TailsArgs {
    /// Dyson index beta (any positive value).
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long)]
    x_step: Option<f64>,
    /// Output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdcheckMode {
    Asymptote,
    Empirical,
}

impl FromStr for IdcheckMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "asymptote" => Ok(Self::Asymptote),
            "empirical" => Ok(Self::Empirical),
            other => Err(format!("expected asymptote or empirical, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LawKind {
    Gue,
    Goe,
}

impl FromStr for LawKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gue" => Ok(Self::Gue),
            "goe" => Ok(Self::Goe),
            other => Err(format!("expected gue or goe, got {other:?}")),
        }
    }
}

#[derive(Args)]
struct IdcheckArgs {
    /// Tail source: the leading-order asymptote or an empirical batch.
    #[arg(long, value_enum)]
    mode: Option<IdcheckMode>,
    /// Dyson index for the asymptote mode.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Finite-N law for the empirical mode.
    #[arg(long, value_enum)]
    law: Option<LawKind>,
    #[arg(long)]
    n_dim: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Evidence grid: low end.
    #[arg(long, allow_negative_numbers = true)]
    grid_min: Option<f64>,
    /// Evidence grid: high end.
    #[arg(long, allow_negative_numbers = true)]
    grid_max: Option<f64>,
    /// Evidence grid: point count.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Decision threshold for the Gaussian-criterion statistic.
    #[arg(long)]
    threshold: Option<f64>,
    /// Subexponential bound prefactor a.
    #[arg(long)]
    bound_a: Option<f64>,
    /// Subexponential bound rate b.
    #[arg(long)]
    bound_b: Option<f64>,
    /// Subexponential bound exponent c.
    #[arg(long)]
    bound_c: Option<f64>,
    /// Withhold the non-Gaussianity assertion (gates every verdict).
    #[arg(long)]
    gaussian_possible: bool,
    /// Output path for the verdict JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV bound-comparison report (x, tail, bound, pass).
    #[arg(long)]
    bound_report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Reduced sample counts and loosened tolerances.
    #[arg(long)]
    quick: bool,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Load a Painleve solution snapshot instead of solving.
    #[arg(long)]
    painleve_snapshot: Option<PathBuf>,
}

/// Failures carry the exit class: usage errors exit 2, runtime errors 3.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let mut file_cfg = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(usage)?,
        None => FileConfig::default(),
    };
    if let Some(threads) = resolve_key(cli.threads, &mut file_cfg, "threads")? {
        if threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| runtime(anyhow!("thread pool: {e}")))?;
        }
    }
    let code = match cli.command {
        Command::Sample(args) => cmd_sample(args, &mut file_cfg)?,
        Command::Cdf(args) => cmd_cdf(args, &mut file_cfg)?,
        Command::Tails(args) => cmd_tails(args, &mut file_cfg)?,
        Command::Idcheck(args) => cmd_idcheck(args, &mut file_cfg)?,
        Command::Verify(args) => cmd_verify(args, &mut file_cfg)?,
    };
    file_cfg.reject_unknown().map_err(usage)?;
    Ok(code)
}

fn resolve_key<T: FromStr>(
    cli: Option<T>,
    cfg: &mut FileConfig,
    key: &str,
) -> Result<Option<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    let from_file = cfg.take::<T>(key).map_err(usage)?;
    Ok(cli.or(from_file))
}

fn positive(value: f64, key: &str) -> Result<f64, Failure> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(usage(anyhow!("--{key} must be positive (got {value})")))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    spec: &'a EnsembleSpec,
    seed: u64,
    n: usize,
    version: &'a str,
    created_unix_secs: u64,
}

fn write_sidecar(out: &Path, spec: &EnsembleSpec, seed: u64, n: usize) -> Result<(), Failure> {
    let created = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let sidecar = Sidecar {
        spec,
        seed,
        n,
        version: env!("CARGO_PKG_VERSION"),
        created_unix_secs: created,
    };
    let path = PathBuf::from(format!("{}.meta.json", out.display()));
    let body = serde_json::to_string_pretty(&sidecar).map_err(|e| runtime(anyhow!(e)))?;
    write_file(&path, &body)
}

fn cmd_sample(args: SampleArgs, cfg: &mut FileConfig) -> Result<ExitCode, Failure> {
    let ensemble = resolve(
        args.ensemble,
        cfg.take::<EnsembleKind>("ensemble").map_err(usage)?,
        EnsembleKind::BetaHermite,
    );
    let beta = resolve(args.beta, cfg.take("beta").map_err(usage)?, 2.0);
    let n_dim = resolve(args.n_dim, cfg.take("n-dim").map_err(usage)?, 100);
    let count = resolve(args.count, cfg.take("count").map_err(usage)?, 1000);
    let seed = resolve(args.seed, cfg.take("seed").map_err(usage)?, 0);
    let sao_length = resolve(args.sao_length, cfg.take("sao-length").map_err(usage)?, 10.0);
    let sao_step = resolve(args.sao_step, cfg.take("sao-step").map_err(usage)?, 0.01);
    let out = resolve(
        args.out,
        cfg.take("out").map_err(usage)?,
        PathBuf::from("samples.csv"),
    );
    let format = resolve(
        args.format,
        cfg.take::<OutputFormat>("format").map_err(usage)?,
        OutputFormat::Csv,
    );

    if count == 0 {
        return Err(usage(anyhow!("--count must be at least 1")));
    }
    let spec = match ensemble {
        EnsembleKind::BetaHermite => {
            let beta = positive(beta, "beta")?;
            if n_dim == 0 {
                return Err(usage(anyhow!("--n-dim must be at least 1")));
            }
            EnsembleSpec::BetaHermite { beta, n_dim }
        }
        EnsembleKind::GoeDense => {
            if n_dim == 0 {
                return Err(usage(anyhow!("--n-dim must be at least 1")));
            }
            EnsembleSpec::GoeDense { n_dim }
        }
        EnsembleKind::Sao => {
            let beta = positive(beta, "beta")?;
            let l = positive(sao_length, "sao-length")?;
            let h = positive(sao_step, "sao-step")?;
            if h >= l {
                return Err(usage(anyhow!(
                    "--sao-step must be smaller than --sao-length (got {h} >= {l})"
                )));
            }
            EnsembleSpec::StochasticAiry { beta, domain_length: l, step_size: h }
        }
    };
    spec.validate().map_err(|e| usage(anyhow!("{e}")))?;

    let batch = run_batch(&spec, count, seed).map_err(|e| runtime(anyhow!("{e}")))?;
    match format {
        OutputFormat::Csv => {
            write_file(&out, &render_sample_csv(&batch))?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct SampleJson<'a> {
                spec: &'a EnsembleSpec,
                seed: u64,
                n: usize,
                version: &'a str,
                samples: &'a [f64],
            }
            let body = serde_json::to_string_pretty(&SampleJson {
                spec: &batch.spec,
                seed: batch.master_seed,
                n: batch.count,
                version: env!("CARGO_PKG_VERSION"),
                samples: &batch.scaled_samples,
            })
            .map_err(|e| runtime(anyhow!(e)))?;
            write_file(&out, &body)?;
        }
    }
    write_sidecar(&out, &batch.spec, batch.master_seed, batch.count)?;
    println!("wrote {} samples to {}", batch.count, out.display());
    Ok(ExitCode::SUCCESS)
}

fn render_sample_csv(batch: &SampleBatch) -> String {
    let mut s = String::from("index,scaled_value\n");
    for (i, v) in batch.scaled_samples.iter().enumerate() {
        let _ = writeln!(s, "{i},{v}");
    }
    s
}

fn solve_for_cli(s_min: f64, s_max: f64, step: f64) -> Result<PainleveSolution, Failure> {
    solve_hastings_mcleod(s_min, s_max, step).map_err(|e| match e {
        betatw_core::painleve::PainleveError::InvalidGrid(_) => {
            usage(anyhow!("solver range: {e}"))
        }
        other => runtime(anyhow!("{other}")),
    })
}

fn cmd_cdf(args: CdfArgs, cfg: &mut FileConfig) -> Result<ExitCode, Failure> {
    let x_min = resolve(args.x_min, cfg.take("x-min").map_err(usage)?, -6.25);
    let x_max = resolve(args.x_max, cfg.take("x-max").map_err(usage)?, 5.0);
    let x_step = resolve(args.x_step, cfg.take("x-step").map_err(usage)?, 0.05);
    let s_min = resolve(args.s_min, cfg.take("s-min").map_err(usage)?, -10.0);
    let s_max = resolve(args.s_max, cfg.take("s-max").map_err(usage)?, 8.0);
    let ode_step = resolve(args.ode_step, cfg.take("ode-step").map_err(usage)?, DEFAULT_STEP);
    let out = resolve(args.out, cfg.take("out").map_err(usage)?, PathBuf::from("cdf.csv"));
    let snapshot_out = args.snapshot_out.or(cfg.take("snapshot-out").map_err(usage)?);

    positive(x_step, "x-step")?;
    positive(ode_step, "ode-step")?;
    if x_min >= x_max {
        return Err(usage(anyhow!("--x-min must be below --x-max (got {x_min} >= {x_max})")));
    }
    let sol = solve_for_cli(s_min, s_max, ode_step)?;
    // All three distribution functions must be defined on the grid; F4's
    // argument is rescaled, so its range is the tightest.
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for beta in [TwBeta::One, TwBeta::Two, TwBeta::Four] {
        let (l, h) = tw_range(beta, &sol);
        lo = lo.max(l);
        hi = hi.min(h);
    }
    if x_min < lo {
        return Err(usage(anyhow!(
            "--x-min {x_min} is below the tabulated range (min {lo:.4}); lower --s-min"
        )));
    }
    if x_max > hi {
        return Err(usage(anyhow!(
            "--x-max {x_max} exceeds the tabulated range (max {hi:.4}); raise --s-max"
        )));
    }

    let mut body = String::from("x,F1,F2,F4\n");
    let steps = ((x_max - x_min) / x_step).round() as usize;
    for i in 0..=steps {
        let x = x_min + i as f64 * x_step;
        let x = x.min(x_max);
        let f1 = tw_cdf(TwBeta::One, x, &sol).map_err(|e| runtime(anyhow!(e)))?;
        let f2 = tw_cdf(TwBeta::Two, x, &sol).map_err(|e| runtime(anyhow!(e)))?;
        let f4 = tw_cdf(TwBeta::Four, x, &sol).map_err(|e| runtime(anyhow!(e)))?;
        let _ = writeln!(body, "{x},{f1},{f2},{f4}");
    }
    write_file(&out, &body)?;
    if let Some(snap) = snapshot_out {
        let mut buf = Vec::new();
        sol.write_csv(&mut buf).map_err(|e| runtime(anyhow!(e)))?;
        write_file(&snap, std::str::from_utf8(&buf).expect("csv is utf-8"))?;
    }
    println!("wrote {} rows to {}", steps + 1, out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_tails(args: TailsArgs, cfg: &mut FileConfig) -> Result<ExitCode, Failure> {
    let beta = resolve(args.beta, cfg.take("beta").map_err(usage)?, 2.0);
    let x_min = resolve(args.x_min, cfg.take("x-min").map_err(usage)?, 1.0);
    let x_max = resolve(args.x_max, cfg.take("x-max").map_err(usage)?, 10.0);
    let x_step = resolve(args.x_step, cfg.take("x-step").map_err(usage)?, 0.5);
    let out = resolve(args.out, cfg.take("out").map_err(usage)?, PathBuf::from("tails.csv"));

    let beta = positive(beta, "beta")?;
    positive(x_step, "x-step")?;
    positive(x_min, "x-min")?;
    if x_min >= x_max {
        return Err(usage(anyhow!("--x-min must be below --x-max (got {x_min} >= {x_max})")));
    }

    let mut body = String::from("x,side,log_asymptote\n");
    let steps = ((x_max - x_min) / x_step).round() as usize;
    for i in 0..=steps {
        let x = (x_min + i as f64 * x_step).min(x_max);
        for (side, name) in [(Side::Left, "left"), (Side::Right, "right")] {
            let v = tail_asymptote(beta, side, x).map_err(|e| runtime(anyhow!(e)))?;
            let _ = writeln!(body, "{x},{name},{v}");
        }
    }
    write_file(&out, &body)?;
    println!("wrote {} rows to {}", 2 * (steps + 1), out.display());
    Ok(ExitCode::SUCCESS)
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn linear_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn cmd_idcheck(args: IdcheckArgs, cfg: &mut FileConfig) -> Result<ExitCode, Failure> {
    let mode = resolve(
        args.mode,
        cfg.take::<IdcheckMode>("mode").map_err(usage)?,
        IdcheckMode::Asymptote,
    );
    let out = resolve(args.out, cfg.take("out").map_err(usage)?, PathBuf::from("idcheck.json"));
    let non_gaussian = !args.gaussian_possible;

    let verdict = match mode {
        IdcheckMode::Asymptote => {
            let beta = positive(resolve(args.beta, cfg.take("beta").map_err(usage)?, 2.0), "beta")?;
            let grid_min = resolve(args.grid_min, cfg.take("grid-min").map_err(usage)?, 10.0);
            let grid_max = resolve(args.grid_max, cfg.take("grid-max").map_err(usage)?, 1e6);
            let points = resolve(args.grid_points, cfg.take("grid-points").map_err(usage)?, 25);
            // The statistic is linear in beta; the default threshold
            // follows (10 at beta = 2).
            let threshold =
                resolve(args.threshold, cfg.take("threshold").map_err(usage)?, 5.0 * beta);
            if points < 8 {
                return Err(usage(anyhow!("--grid-points must be at least 8 (got {points})")));
            }
            if !(grid_min > 1.0 && grid_max > grid_min) {
                return Err(usage(anyhow!(
                    "--grid-min/--grid-max must satisfy 1 < min < max (got {grid_min}, {grid_max})"
                )));
            }
            let tail = TailFunction::absolute(
                TailFunction::asymptote(beta, Side::Left).map_err(|e| usage(anyhow!("{e}")))?,
                TailFunction::asymptote(beta, Side::Right).map_err(|e| usage(anyhow!("{e}")))?,
            );
            let grid = log_spaced(grid_min, grid_max, points);
            let opts = ClassifyOptions { non_gaussian_asserted: non_gaussian, exp_bound: None };
            classify_id(&tail, &grid, threshold, &opts).map_err(|e| runtime(anyhow!("{e}")))?
        }
        IdcheckMode::Empirical => {
            let law = resolve(args.law, cfg.take::<LawKind>("law").map_err(usage)?, LawKind::Gue);
            let n_dim = resolve(args.n_dim, cfg.take("n-dim").map_err(usage)?, 50);
            let count = resolve(args.count, cfg.take("count").map_err(usage)?, 20_000);
            let seed = resolve(args.seed, cfg.take("seed").map_err(usage)?, 0);
            if n_dim == 0 {
                return Err(usage(anyhow!("--n-dim must be at least 1")));
            }
            if count == 0 {
                return Err(usage(anyhow!("--count must be at least 1")));
            }
            let nf = n_dim as f64;
            let (beta, default_grid, default_bound): (f64, (f64, f64, usize), (f64, f64, f64)) =
                match law {
                    LawKind::Gue => (2.0, (0.2, 0.8, 13), (2.0, 0.8 * 2.0 * nf, 2.0)),
                    LawKind::Goe => (1.0, (2.5, 3.5, 11), (1.0, nf / 9.0, 2.0)),
                };
            let grid_min = resolve(args.grid_min, cfg.take("grid-min").map_err(usage)?, default_grid.0);
            let grid_max = resolve(args.grid_max, cfg.take("grid-max").map_err(usage)?, default_grid.1);
            let points =
                resolve(args.grid_points, cfg.take("grid-points").map_err(usage)?, default_grid.2);
            let a = positive(
                resolve(args.bound_a, cfg.take("bound-a").map_err(usage)?, default_bound.0),
                "bound-a",
            )?;
            let b = positive(
                resolve(args.bound_b, cfg.take("bound-b").map_err(usage)?, default_bound.1),
                "bound-b",
            )?;
            let c = resolve(args.bound_c, cfg.take("bound-c").map_err(usage)?, default_bound.2);
            if c <= 1.0 {
                return Err(usage(anyhow!("--bound-c must exceed 1 (got {c})")));
            }
            if points < 8 {
                return Err(usage(anyhow!("--grid-points must be at least 8 (got {points})")));
            }
            if !(grid_min > 0.0 && grid_max > grid_min) {
                return Err(usage(anyhow!(
                    "--grid-min/--grid-max must satisfy 0 < min < max (got {grid_min}, {grid_max})"
                )));
            }
            let threshold = resolve(args.threshold, cfg.take("threshold").map_err(usage)?, 10.0);

            let spec = EnsembleSpec::BetaHermite { beta, n_dim };
            let batch = run_batch(&spec, count, seed).map_err(|e| runtime(anyhow!("{e}")))?;
            // Documented normalization: lambda/sqrt(N), centered at the
            // sample mean for the GUE law and uncentered for GOE.
            let mut devs: Vec<f64> = match law {
                LawKind::Gue => {
                    let mean = batch.scaled_samples.iter().sum::<f64>() / count as f64;
                    batch
                        .scaled_samples
                        .iter()
                        .map(|s| (s - mean).abs() / nf.powf(2.0 / 3.0))
                        .collect()
                }
                LawKind::Goe => batch
                    .scaled_samples
                    .iter()
                    .map(|s| {
                        let lambda = s / nf.powf(1.0 / 6.0) + 2.0 * nf.sqrt();
                        (lambda / nf.sqrt()).abs()
                    })
                    .collect(),
            };
            devs.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
            let tail = TailFunction::empirical_from_sorted(devs);
            let grid = linear_spaced(grid_min, grid_max, points);
            if let Some(report_path) = args
                .bound_report
                .or(cfg.take("bound-report").map_err(usage)?)
            {
                let report = check_exponential_bound(&tail, a, b, c, &grid)
                    .map_err(|e| runtime(anyhow!("{e}")))?;
                let mut body = String::from("x,tail,bound,pass\n");
                for row in &report.rows {
                    let _ = writeln!(
                        body,
                        "{},{},{},{}",
                        row.x,
                        row.log_tail.exp(),
                        row.log_bound.exp(),
                        row.pass
                    );
                }
                write_file(&report_path, &body)?;
            }
            let opts = ClassifyOptions {
                non_gaussian_asserted: non_gaussian,
                exp_bound: Some((a, b, c)),
            };
            classify_id(&tail, &grid, threshold, &opts).map_err(|e| runtime(anyhow!("{e}")))?
        }
    };

    let body = serde_json::to_string_pretty(&verdict).map_err(|e| runtime(anyhow!(e)))?;
    write_file(&out, &body)?;
    println!("verdict: {:?} -> {}", verdict.verdict, out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, cfg: &mut FileConfig) -> Result<ExitCode, Failure> {
    let quick = args.quick || cfg.take::<bool>("quick").map_err(usage)?.unwrap_or(false);
    let out = args.out.or(cfg.take("out").map_err(usage)?);
    let snapshot = args.painleve_snapshot.or(cfg.take("painleve-snapshot").map_err(usage)?);

    let sol = match snapshot {
        Some(path) => {
            let file = std::fs::File::open(&path)
                .with_context(|| format!("opening snapshot {}", path.display()))
                .map_err(runtime)?;
            PainleveSolution::read_csv(std::io::BufReader::new(file))
                .with_context(|| format!("loading snapshot {}", path.display()))
                .map_err(runtime)?
        }
        None => betatw_core::painleve::solve_default(),
    };

    let scale = if quick { VerifyScale::Quick } else { VerifyScale::Default };
    let report = run_all_with(scale, &sol);
    for check in &report.checks {
        println!("{}", check.summary_line());
    }
    println!(
        "{}: {}/{} checks passed ({} scale)",
        if report.all_passed { "OK" } else { "FAILED" },
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len(),
        report.scale,
    );
    if let Some(path) = out {
        let body = serde_json::to_string_pretty(&report).map_err(|e| runtime(anyhow!(e)))?;
        write_file(&path, &body)?;
    }
    Ok(if report.all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
