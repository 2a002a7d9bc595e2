//! `idcm`: L_p intersection bodies, p-affine dual curvature measures and the
//! even Minkowski problem from the command line.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage, 3 I/O.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "idcm", version, about = "L_p intersection bodies, p-affine dual curvature measures and their even Minkowski problem")]
#[command(after_help = "Environment: IDCM_THREADS caps the worker threads; RUST_LOG sets the log level (default warn).\n\
Exit codes: 0 ok, 1 check failures, 2 usage, 3 I/O.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample I_pK (or I_p²K with --iterate 2) on a grid and write radial.csv.
    IpBody(IpBodyArgs),
    /// Atoms of the p-affine dual curvature measure of a polytope.
    IpMeasure(IpMeasureArgs),
    /// p-cosine or spherical Radon transform of a sampled even function.
    Transform(TransformArgs),
    /// Solve the even Minkowski problem for a measure.
    Solve(SolveArgs),
    /// Run a verification suite and write a CSV report.
    Verify(VerifyArgs),
    /// Share of a measure carried by a subspace, against the concentration bound.
    Concentration(ConcentrationArgs),
    /// Margins of the sandwich inequality between I_pK and IK.
    Sandwich(SandwichArgs),
    /// Gaps to the p -> 1 and p -> 0 limits for one body.
    Limits(LimitsArgs),
}

#[derive(Args, Debug)]
pub struct BodyInput {
    /// Body JSON: {"kind": "polytope", ...} or {"kind": "radial", ...}.
    #[arg(long = "in", value_name = "BODY.json")]
    pub input: std::path::PathBuf,
    /// Grid resolution: nodes on S¹, rings on S² (defaults 720 and 64).
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Args, Debug)]
pub struct IpBodyArgs {
    /// Exponent, in (−inf,0)∪(0,1).
    #[arg(long, allow_negative_numbers = true, value_parser = parse_p)]
    pub p: f64,
    #[command(flatten)]
    pub body: BodyInput,
    /// 1 for I_pK, 2 for I_p²K.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub iterate: u8,
    #[arg(long, value_name = "RADIAL.csv")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Direct,
    Transform,
    Both,
}

#[derive(Args, Debug)]
pub struct IpMeasureArgs {
    #[arg(long, allow_negative_numbers = true, value_parser = parse_p)]
    pub p: f64,
    #[command(flatten)]
    pub body: BodyInput,
    #[arg(long, value_enum, default_value_t = Route::Transform)]
    pub route: Route,
    #[arg(long, value_name = "MEASURE.json")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Kernel exponent of T_p, > −1.
    #[arg(long, allow_negative_numbers = true, required_unless_present = "radon", conflicts_with = "radon")]
    pub p: Option<f64>,
    /// Spherical Radon transform instead of T_p.
    #[arg(long)]
    pub radon: bool,
    /// Function JSON: {"grid": {...}, "values": [...]}.
    #[arg(long = "in", value_name = "F.json")]
    pub input: std::path::PathBuf,
    #[arg(long, value_name = "RESULT.csv")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, allow_negative_numbers = true, value_parser = parse_p)]
    pub p: f64,
    /// Measure JSON: {"dim", "even", "atoms": [{"u", "w"}, ...]}.
    #[arg(long, value_name = "MU.json")]
    pub measure: std::path::PathBuf,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = 1e-7)]
    pub grad_tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, value_name = "BODY.json")]
    pub out: Option<std::path::PathBuf>,
    /// Per-iteration objective, gradient norm and step.
    #[arg(long, value_name = "TRACE.csv")]
    pub trace: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// transforms, bodies, measures, limits, solver, concentration or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Nodes on S¹; S² checks use a matched ring count.
    #[arg(long, default_value_t = 720)]
    pub grid: usize,
    /// Skip the second evaluation at twice the resolution.
    #[arg(long)]
    pub no_convergence: bool,
    #[arg(long, value_name = "REPORT.csv")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundArg {
    /// dim ξ / n, the hypothesis on Minkowski-problem data.
    Input,
    /// dim ξ / (n − p), satisfied by every I_p measure.
    Ip,
}

#[derive(Args, Debug)]
pub struct ConcentrationArgs {
    /// Measure JSON to test.
    #[arg(long, value_name = "MU.json", required_unless_present = "input", conflicts_with = "input")]
    pub measure: Option<std::path::PathBuf>,
    /// Body JSON; its measure I_p(K,·) is computed first (needs --p).
    #[arg(long = "in", value_name = "BODY.json", requires = "p")]
    pub input: Option<std::path::PathBuf>,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_p)]
    pub p: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// "e1", "e1,e3", or basis rows such as "1,1,0;0,0,1".
    #[arg(long, allow_hyphen_values = true)]
    pub subspace: String,
    #[arg(long, value_enum, default_value_t = BoundArg::Input)]
    pub bound: BoundArg,
    /// Atoms closer than this to the subspace count as inside.
    #[arg(long, default_value_t = 1e-9)]
    pub angular_tol: f64,
}

#[derive(Args, Debug)]
pub struct SandwichArgs {
    #[arg(long, allow_negative_numbers = true, value_parser = parse_p)]
    pub p: f64,
    #[command(flatten)]
    pub body: BodyInput,
    /// Margins below −tol count as failures.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub body: BodyInput,
    #[arg(long, value_name = "LIMITS.csv")]
    pub out: Option<std::path::PathBuf>,
}

/// Rejects `p` outside `(−inf,0)∪(0,1)` before anything is read.
fn parse_p(s: &str) -> Result<f64, String> {
    let p: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    idcm::LpParams::new(2, p).map(|_| p).map_err(|e| e.to_string())
}

fn init_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("IDCM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_threads();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
