//! Command-line driver for convergence studies, multigrid studies and
//! matrix audits.  All runs are deterministic; identical invocations emit
//! byte-identical CSV.

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpm::geometry::SplineCurve;
use cpm::multigrid::{MgParams, SmootherMode};
use cpm::operators::SystemParams;
use cpm::run::{
    audit_csv, convergence_csv, multigrid_csv, run_convergence, run_matrix_audit,
    run_multigrid_study, RunConfig, SolverKind,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cpm",
    about = "Closest point method solvers for elliptic PDEs on curves and surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve on a halving dx ladder and report errors and observed orders.
    Convergence(CommonArgs),
    /// Run V-cycle solves and stream per-cycle diagnostics.
    Multigrid(CommonArgs),
    /// Assemble systems and audit DOFs, sparsity and M-matrix structure.
    Audit(AuditArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Direct,
    Vcycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum SmootherArg {
    /// Jacobi on the shifted Laplacian, each sweep followed by an extension.
    RuuthMerriman,
    /// Jacobi on the full system with the modified residual.
    Standard,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem name: circle | bean | sphere_harmonic | torus | dziuk |
    /// sphere_varcoef.
    #[arg(long)]
    problem: String,

    /// Grid spacing(s): a comma-separated list, or a single finest value
    /// combined with --levels.
    #[arg(long, value_delimiter = ',', required = true)]
    dx: Vec<f64>,

    /// Expand a single --dx into this many halvings (dx, dx/2, dx/4, ...).
    #[arg(long)]
    levels: Option<usize>,

    /// Linear solver for convergence runs.
    #[arg(long, value_enum, default_value = "direct")]
    solver: SolverArg,

    /// Zeroth-order shift of the PDE.
    #[arg(long, default_value_t = 1.0)]
    c: f64,

    /// Side-condition penalty, applied as given at every dx
    /// (default: 2*dim/dx^2 per grid).
    #[arg(long)]
    gamma: Option<f64>,

    /// Interpolation degree for the Laplacian extension.
    #[arg(long, default_value_t = 1)]
    p: usize,

    /// Interpolation degree for the side-condition extension.
    #[arg(long, default_value_t = 3)]
    q: usize,

    /// Pre-smoothing sweeps per V-cycle.
    #[arg(long, default_value_t = 3)]
    nu1: usize,

    /// Post-smoothing sweeps per V-cycle.
    #[arg(long, default_value_t = 3)]
    nu2: usize,

    /// Relative successive-change stopping threshold.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,

    /// V-cycle budget per solve.
    #[arg(long, default_value_t = 50)]
    max_cycles: usize,

    /// Coarsest grid resolution N (coarsest dx = 1/N).
    #[arg(long, default_value_t = 5)]
    coarsest_n: usize,

    /// Smoothing strategy.
    #[arg(long, value_enum, default_value = "ruuth-merriman")]
    smoother: SmootherArg,

    /// File of `x y` rows overriding the bean control polygon.
    #[arg(long)]
    bean_points: Option<PathBuf>,

    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Directory for band CSV dumps.
    #[arg(long)]
    band_dump: Option<PathBuf>,

    /// Directory for MatrixMarket exports of A, L, E3 and M.
    #[arg(long)]
    matrix_out: Option<PathBuf>,
}

fn to_config(args: &CommonArgs) -> Result<RunConfig, cpm::Error> {
    let mut dx_list = args.dx.clone();
    if let Some(levels) = args.levels {
        if dx_list.len() != 1 {
            return Err(cpm::Error::InvalidConfig(
                "--levels needs exactly one --dx value".into(),
            ));
        }
        if levels == 0 {
            return Err(cpm::Error::InvalidConfig("--levels must be positive".into()));
        }
        let finest = dx_list[0];
        dx_list = (0..levels).map(|k| finest / 2f64.powi(k as i32)).collect();
    }
    let bean_points = match &args.bean_points {
        Some(path) => Some(SplineCurve::from_points_file(path)?.control_points().to_vec()),
        None => None,
    };
    Ok(RunConfig {
        problem: args.problem.clone(),
        dx_list,
        solver: match args.solver {
            SolverArg::Direct => SolverKind::Direct,
            SolverArg::Vcycle => SolverKind::VCycle,
        },
        system: SystemParams { c: args.c, gamma: args.gamma, p: args.p, q: args.q },
        mg: MgParams {
            nu1: args.nu1,
            nu2: args.nu2,
            tol: args.tol,
            max_cycles: args.max_cycles,
            smoother: match args.smoother {
                SmootherArg::RuuthMerriman => SmootherMode::RuuthMerriman,
                SmootherArg::Standard => SmootherMode::Standard,
            },
        },
        coarsest_n: args.coarsest_n,
        bean_points,
        band_dump: None,
        matrix_out: None,
    })
}

fn emit(csv: String, out: &Option<PathBuf>) -> Result<(), cpm::Error> {
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run() -> Result<(), cpm::Error> {
    match Cli::parse().command {
        Command::Convergence(args) => {
            let config = to_config(&args)?;
            emit(convergence_csv(&run_convergence(&config)?), &args.out)
        }
        Command::Multigrid(args) => {
            let config = to_config(&args)?;
            emit(multigrid_csv(&run_multigrid_study(&config)?), &args.out)
        }
        Command::Audit(args) => {
            let mut config = to_config(&args.common)?;
            config.band_dump = args.band_dump.clone();
            config.matrix_out = args.matrix_out.clone();
            emit(audit_csv(&run_matrix_audit(&config)?), &args.common.out)
        }
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
