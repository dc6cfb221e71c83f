//! Command-line front end: rate-function tables, spherical-integral
//! evaluation, ensemble sampling, and the reproducible experiment runs.
//!
//! Exit status: 0 when the command (and every declared tolerance, for
//! `experiment`) succeeds, 1 when an experiment finishes but a tolerance
//! fails, 2 for usage, I/O, or domain errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rank1_ldp_core::ensemble::{eigen_sample_stream, EnsembleConfig};
use rank1_ldp_core::experiments::{
    run_as_limit, run_continuity, run_ldp_slope, run_spherical_consistency,
    threshold_for_rate, ExperimentReport, DEFAULT_KAPPA,
};
use rank1_ldp_core::measures::{read_eigenvalues, read_spectrum};
use rank1_ldp_core::ratefn::{normalization_log_ratio, rate_f, rate_k, RateParams};
use rank1_ldp_core::spherical::{
    i_limit_detailed, log_spherical_finite_n, mc_oracle, solve_fixed_point,
};
use rank1_ldp_core::{Beta, Result, SphericalParams};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rank1-ldp",
    version,
    about = "Top-eigenvalue large deviations for rank-one deformed Gaussian ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the rate functions F and K over x at fixed (beta, theta).
    Rate(RateArgs),
    /// Evaluate the spherical integral for a spectrum file.
    Spherical(SphericalArgs),
    /// Sample deformed ensemble replicas and report top-eigenvalue statistics.
    Sample(SampleArgs),
    /// Run one of the reproducible experiments and write its report.
    Experiment(ExperimentArgs),
}

fn parse_beta(s: &str) -> std::result::Result<Beta, String> {
    s.parse::<Beta>().map_err(|e| e.to_string())
}

/// Inclusive numeric grid written as start:stop:step.
fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected start:stop:step, got {s:?}"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|e| format!("{e} in {p:?}")))
        .collect::<std::result::Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(format!("grid {s:?} must have start <= stop and step > 0"));
    }
    let mut xs = Vec::new();
    let mut k = 0u64;
    loop {
        let x = start + k as f64 * step;
        if x > stop + 1e-9 * step {
            break;
        }
        xs.push(x);
        k += 1;
    }
    Ok(xs)
}

#[derive(Args)]
struct RateArgs {
    #[arg(long, value_parser = parse_beta)]
    beta: Beta,
    #[arg(long)]
    theta: f64,
    /// Single evaluation point.
    #[arg(long, conflicts_with = "x_grid", required_unless_present = "x_grid")]
    x: Option<f64>,
    /// Evaluation grid as start:stop:step (inclusive).
    #[arg(long, value_name = "START:STOP:STEP")]
    x_grid: Option<String>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SphericalMode {
    /// Finite-N Laplace asymptotic via the fixed point.
    Finite,
    /// N to infinity limit of the empirical measure of the file.
    Limit,
    /// Monte Carlo estimate from the Gaussian representation.
    Oracle,
}

#[derive(Args)]
struct SphericalArgs {
    #[arg(long, value_parser = parse_beta)]
    beta: Beta,
    #[arg(long)]
    theta: f64,
    /// Spectrum file: one eigenvalue per line (optional weight column).
    #[arg(long)]
    spectrum: PathBuf,
    #[arg(long, value_enum)]
    mode: SphericalMode,
    /// Monte Carlo sample count (oracle mode).
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Monte Carlo seed (oracle mode).
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_parser = parse_beta)]
    beta: Beta,
    #[arg(long)]
    theta: f64,
    /// Matrix dimension.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    replicas: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    /// Almost-sure limit sweep over (theta, n) cells.
    Aslimit,
    /// Tail-probability slope regression against the rate function.
    Ldpslope,
    /// Finite-N spherical integral against the Monte Carlo oracle.
    Sphconsist,
    /// Continuity modulus of the spherical integral in its arguments.
    Continuity,
}

impl ExperimentKind {
    fn name(self) -> &'static str {
        match self {
            ExperimentKind::Aslimit => "aslimit",
            ExperimentKind::Ldpslope => "ldpslope",
            ExperimentKind::Sphconsist => "sphconsist",
            ExperimentKind::Continuity => "continuity",
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    kind: ExperimentKind,
    #[arg(long, value_parser = parse_beta, default_value = "2")]
    beta: Beta,
    /// Pull strength (defaults per kind; ignored by aslimit).
    #[arg(long)]
    theta: Option<f64>,
    /// Comma-separated theta grid (aslimit; default 0.25 to 2.0 by 0.25).
    #[arg(long, value_delimiter = ',')]
    theta_grid: Option<Vec<f64>>,
    /// Comma-separated matrix sizes (defaults per kind).
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    /// Matrix size for the continuity run (default 200).
    #[arg(long)]
    n: Option<usize>,
    /// Replicas per cell (defaults per kind).
    #[arg(long)]
    replicas: Option<usize>,
    /// Oracle samples per cell (sphconsist; default 1000000).
    #[arg(long)]
    samples: Option<usize>,
    /// Explicit tail threshold (ldpslope); overrides --k-target.
    #[arg(long)]
    x_threshold: Option<f64>,
    /// Rate value whose threshold is found by bisection (ldpslope; default 0.02).
    #[arg(long)]
    k_target: Option<f64>,
    /// Comma-separated top-eigenvalue shifts (continuity; default 0.2,0.1,0.05,0.025).
    #[arg(long, value_delimiter = ',')]
    delta_grid: Option<Vec<f64>>,
    /// Dudley budget exponent in (0, 1/2) (continuity; default 0.25).
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for the replica fan-out (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Report directory (default: the kind's name).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_rate(args: &RateArgs) -> Result<ExitCode> {
    let p = RateParams::new(args.beta, args.theta)?;
    let norm = normalization_log_ratio(&p);
    let xs: Vec<f64> = match (&args.x, &args.x_grid) {
        (Some(x), None) => vec![*x],
        (None, Some(grid)) => {
            parse_grid(grid).map_err(rank1_ldp_core::Error::InvalidParameter)?
        }
        _ => unreachable!("clap enforces exactly one of --x and --x-grid"),
    };
    let mut csv = String::from("x,F,K,branch\n");
    for &x in &xs {
        let f = rate_f(&p, x);
        let k = f - norm;
        debug_assert!(!k.is_finite() || (k - rate_k(&p, x)).abs() < 1e-14);
        csv.push_str(&format!("{x},{f},{k},{}\n", p.branch(x)));
    }
    emit(args.out.as_ref(), &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn with_path<T>(path: &std::path::Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| {
        rank1_ldp_core::Error::InvalidParameter(format!("{}: {e}", path.display()))
    })
}

fn run_spherical(args: &SphericalArgs) -> Result<ExitCode> {
    let p = SphericalParams::new(args.beta, args.theta)?;
    match args.mode {
        SphericalMode::Finite => {
            let eigs = with_path(&args.spectrum, read_eigenvalues(&args.spectrum))?;
            let sol = solve_fixed_point(&eigs, &p)?;
            let value = log_spherical_finite_n(&eigs, &p)?;
            println!("mode=finite");
            println!("value={value}");
            println!("v={}", sol.v);
            println!("w={}", sol.w);
            println!("residual={}", sol.residual);
        }
        SphericalMode::Limit => {
            let mu = with_path(&args.spectrum, read_spectrum(&args.spectrum))?;
            let x = mu.max_support();
            let eval = i_limit_detailed(&mu, x, &p)?;
            println!("mode=limit");
            println!("value={}", eval.value);
            println!("v={}", eval.v);
            println!("w={}", eval.w);
        }
        SphericalMode::Oracle => {
            let eigs = with_path(&args.spectrum, read_eigenvalues(&args.spectrum))?;
            let est = mc_oracle(&eigs, &p, args.samples, args.seed)?;
            println!("mode=oracle");
            println!("value={}", est.mean_log);
            println!("std_err={}", est.std_err);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_sample(args: &SampleArgs) -> Result<ExitCode> {
    let config = EnsembleConfig::new(args.n, args.beta, args.theta, args.seed)?;
    let samples = eigen_sample_stream(&config, args.replicas)?;
    let mut csv = String::from("replica,top_eigenvalue,second_eigenvalue,bulk_edge_estimate\n");
    for (replica, s) in samples.iter().enumerate() {
        csv.push_str(&format!(
            "{replica},{},{},{}\n",
            s.top(),
            s.second(),
            s.bulk_edge_estimate()
        ));
    }
    emit(args.out.as_ref(), &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn run_experiment(args: &ExperimentArgs) -> Result<ExitCode> {
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| {
                rank1_ldp_core::Error::InvalidParameter(format!("thread pool: {e}"))
            })?;
    }
    let report: ExperimentReport = match args.kind {
        ExperimentKind::Aslimit => {
            let theta_grid = args
                .theta_grid
                .clone()
                .unwrap_or_else(|| (1..=8).map(|k| k as f64 * 0.25).collect());
            let n_grid = args.n_grid.clone().unwrap_or_else(|| vec![400]);
            let replicas = args.replicas.unwrap_or(200);
            run_as_limit(args.beta, &theta_grid, &n_grid, replicas, args.seed)?
        }
        ExperimentKind::Ldpslope => {
            let theta = args.theta.unwrap_or(2.0);
            let n_grid = args.n_grid.clone().unwrap_or_else(|| vec![50, 100, 200]);
            let replicas = args.replicas.unwrap_or(50_000);
            let x = match args.x_threshold {
                Some(x) => x,
                None => {
                    threshold_for_rate(args.beta, theta, args.k_target.unwrap_or(0.02))?
                }
            };
            let (report, _) =
                run_ldp_slope(args.beta, theta, x, &n_grid, replicas, args.seed)?;
            report
        }
        ExperimentKind::Sphconsist => {
            let theta = args.theta.unwrap_or(0.5);
            let n_grid = args.n_grid.clone().unwrap_or_else(|| vec![10, 20, 50]);
            let samples = args.samples.unwrap_or(1_000_000);
            run_spherical_consistency(args.beta, theta, &n_grid, samples, args.seed)?
        }
        ExperimentKind::Continuity => {
            let theta = args.theta.unwrap_or(1.0);
            let n = args.n.unwrap_or(200);
            let delta_grid = args
                .delta_grid
                .clone()
                .unwrap_or_else(|| vec![0.2, 0.1, 0.05, 0.025]);
            let kappa = args.kappa.unwrap_or(DEFAULT_KAPPA);
            run_continuity(args.beta, theta, n, &delta_grid, kappa, args.seed)?
        }
    };
    let dir = args
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(args.kind.name()));
    report.write_dir(&dir)?;
    print!("{}", report.summary_text());
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Rate(args) => run_rate(args),
        Command::Spherical(args) => run_spherical(args),
        Command::Sample(args) => run_sample(args),
        Command::Experiment(args) => run_experiment(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
