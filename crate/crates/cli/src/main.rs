//! `csrk` — construct, verify and run symplectic Runge-Kutta methods built
//! from weighted orthogonal polynomial families.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use csrk::integrator::log_log_slope;
use csrk::tableau::fmt_g17;
use csrk::{convergence_study, integrate, predicted_rk_order, IntegrateError};

use config::{config_err, parse_h_list, CliError, RunConfig};

/// Residual threshold for the verification verdict.
const VERIFY_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "csrk",
    version,
    about = "Symplectic and symmetric Runge-Kutta methods from weighted orthogonal polynomials",
    after_help = "Methods: legendre3_s2, legendre3_s3, laguerre2_s2, hermite3_s3, hermite4_sym_s3\n\
                  Problems: kepler, pendulum, exponential\n\
                  Exit codes: 0 success, 1 numerical property failure, 2 configuration error.\n\
                  CSTAGE_RK_SEED is reserved; every command is deterministic."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonOpts {
    /// Method name (see --help for the list).
    #[arg(long)]
    method: Option<String>,

    /// Value of the method family's free parameter.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,

    /// Override the quadrature point count used for discretization.
    #[arg(long)]
    quad_points: Option<usize>,

    /// Test problem name.
    #[arg(long)]
    problem: Option<String>,

    /// Step size; a comma-separated list selects a convergence sweep.
    #[arg(long, value_name = "H[,H2,...]")]
    h: Option<String>,

    /// Number of steps.
    #[arg(long)]
    steps: Option<usize>,

    /// Final time of a convergence sweep.
    #[arg(long)]
    t_end: Option<f64>,

    /// Stage solver: fixed-point | newton.
    #[arg(long)]
    solver: Option<String>,

    /// Stage-increment tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// JSON configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

impl CommonOpts {
    /// Loads the optional config file and overlays these flags.
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let (h, h_list) = match self.h.as_deref() {
            None => (None, None),
            Some(text) if text.contains(',') => (None, Some(parse_h_list(text)?)),
            Some(text) => (
                Some(
                    text.parse::<f64>()
                        .map_err(|e| config_err(format!("--h `{text}`: {e}")))?,
                ),
                None,
            ),
        };
        let flags = RunConfig {
            method: self.method.clone(),
            mu: self.mu,
            quad_points: self.quad_points,
            problem: self.problem.clone(),
            h,
            steps: self.steps,
            t_end: self.t_end,
            h_list,
            solver: self.solver.clone(),
            tol: self.tol,
            out: self.out.clone(),
        };
        Ok(base.overlaid(flags))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a method's Butcher tableau (block format, then flat format).
    Tableau(CommonOpts),
    /// Verify symplecticity, symmetry and order conditions of a method.
    Verify(CommonOpts),
    /// Integrate a problem and emit the trajectory as CSV.
    Integrate(CommonOpts),
    /// Step-halving convergence study; CSV of (h, error) plus the slope.
    Convergence(CommonOpts),
    /// The long-run Kepler experiment (defaults: laguerre2_s2, mu = 0,
    /// h = 0.1, 10000 steps).
    Kepler(CommonOpts),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tableau(opts) => opts.resolve().and_then(cmd_tableau),
        Command::Verify(opts) => opts.resolve().and_then(cmd_verify),
        Command::Integrate(opts) => opts.resolve().and_then(cmd_integrate),
        Command::Convergence(opts) => opts.resolve().and_then(cmd_convergence),
        Command::Kepler(opts) => opts.resolve().and_then(cmd_kepler),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("csrk: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn cmd_tableau(cfg: RunConfig) -> Result<ExitCode, CliError> {
    let resolved = cfg.resolve_method(None, None)?;
    let mut sink = output::open_sink(cfg.out.as_deref())?;
    let header = format!(
        "# {} (family {}, mu = {}, {} quadrature points)",
        resolved.name,
        resolved.name.family_kind().name(),
        fmt_g17(resolved.mu),
        resolved.quad_points
    );
    // The block section is `#`-prefixed so the whole document stays
    // parseable as the flat format.
    let block: String = resolved
        .tableau
        .to_block_string()
        .lines()
        .map(|l| format!("# {l}\n"))
        .collect();
    let flat = resolved.tableau.to_flat_string();
    write!(sink, "{header}\n{block}{flat}")
        .map_err(|e| config_err(format!("write failed: {e}")))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cfg: RunConfig) -> Result<ExitCode, CliError> {
    let resolved = cfg.resolve_method(None, None)?;
    let tableau = &resolved.tableau;
    let method = &resolved.method;
    let name = resolved.name;

    let symplectic = tableau.symplectic_residual();
    let symmetric = tableau.symmetric_residual();
    let cs_symmetric = method.check_symmetric().ok();
    let report = tableau.order_conditions(4);
    let cs_bound = method.orders().predicted_cs_order();
    let rk_bound = predicted_rk_order(
        method.orders(),
        2 * resolved.quad_points,
        method.b_degree(),
        method.a_tau_degree(),
        method.a_sigma_degree(),
    );

    let claimed = name.claimed_order();
    let symplectic_ok = symplectic < VERIFY_TOL;
    let symmetric_ok = !name.symmetric() || symmetric < VERIFY_TOL;
    let order_ok = report.satisfied_through >= claimed.min(4);
    let pass = symplectic_ok && symmetric_ok && order_ok;

    println!(
        "method: {name} (mu = {}, {} quadrature points)",
        fmt_g17(resolved.mu),
        resolved.quad_points
    );
    println!(
        "symplectic residual:          {:.3e}  [{}]",
        symplectic,
        if symplectic_ok { "ok" } else { "FAIL" }
    );
    let symmetric_note = if name.symmetric() {
        if symmetric < VERIFY_TOL {
            "ok"
        } else {
            "FAIL"
        }
    } else {
        "not a symmetric family"
    };
    println!("symmetric residual:           {symmetric:.3e}  [{symmetric_note}]");
    match cs_symmetric {
        Some(residual) => println!("stage-function symmetry:      {residual:.3e}"),
        None => println!("stage-function symmetry:      n/a (weight not reflection-symmetric)"),
    }
    for condition in &report.conditions {
        println!(
            "order {} condition {:<18} residual {:.3e}",
            condition.order, condition.label, condition.residual
        );
    }
    println!(
        "order conditions satisfied through: {} (claimed {claimed})",
        report.satisfied_through
    );
    println!("order lower bound, coefficient functions: {cs_bound}");
    println!("order lower bound, discretized method:    {rk_bound}");
    println!("verdict: {}", if pass { "ok" } else { "FAIL" });

    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn map_integrate_err(err: IntegrateError) -> CliError {
    match err {
        IntegrateError::ZeroSteps
        | IntegrateError::InvalidStepSizes(_)
        | IntegrateError::MissingExactSolution
        | IntegrateError::FamilyMismatch => config_err(err.to_string()),
        other => CliError::Numerical(other.to_string()),
    }
}

fn cmd_integrate(cfg: RunConfig) -> Result<ExitCode, CliError> {
    let resolved = cfg.resolve_method(None, None)?;
    let problem = cfg.resolve_problem()?;
    let solver = cfg.resolve_solver()?;
    let h = cfg.resolve_h(0.1)?;
    let steps = cfg.resolve_steps(100)?;
    let trajectory =
        integrate(&resolved.tableau, &problem, h, steps, &solver).map_err(map_integrate_err)?;
    let mut sink = output::open_sink(cfg.out.as_deref())?;
    output::write_trajectory_csv(&mut sink, &problem, &trajectory)
        .map_err(|e| config_err(format!("write failed: {e}")))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_convergence(cfg: RunConfig) -> Result<ExitCode, CliError> {
    let resolved = cfg.resolve_method(None, None)?;
    let problem = cfg.resolve_problem()?;
    let solver = cfg.resolve_solver()?;
    let t_end = cfg.t_end.unwrap_or(1.0);
    let h_list = match (&cfg.h_list, cfg.h) {
        (Some(list), _) => list.clone(),
        (None, Some(single)) => vec![single],
        (None, None) => vec![0.1, 0.05, 0.025, 0.0125],
    };
    let study = convergence_study(&resolved.tableau, &problem, t_end, &h_list, &solver)
        .map_err(map_integrate_err)?;
    let mut sink = output::open_sink(cfg.out.as_deref())?;
    output::write_convergence_csv(&mut sink, &study.samples)
        .map_err(|e| config_err(format!("write failed: {e}")))?;
    drop(sink);
    eprintln!("fitted slope: {:.4}", study.slope);
    Ok(ExitCode::SUCCESS)
}

fn cmd_kepler(cfg: RunConfig) -> Result<ExitCode, CliError> {
    if let Some(problem) = cfg.problem.as_deref() {
        if problem != "kepler" {
            return Err(config_err(
                "the kepler command always runs the kepler problem",
            ));
        }
    }
    let resolved = cfg.resolve_method(Some("laguerre2_s2"), Some(0.0))?;
    let problem = csrk::problems::kepler();
    let solver = cfg.resolve_solver()?;
    let h = cfg.resolve_h(0.1)?;
    let steps = cfg.resolve_steps(10_000)?;
    let trajectory =
        integrate(&resolved.tableau, &problem, h, steps, &solver).map_err(map_integrate_err)?;

    // Long-run diagnostics go to stderr; the CSV stays machine-clean.
    if let (Some(energy), Some(errors)) = (&trajectory.energy_error, &trajectory.solution_error) {
        let max_energy = energy.iter().copied().fold(0.0, f64::max);
        let window = trajectory
            .times
            .iter()
            .zip(errors.iter())
            .filter(|&(&t, _)| t >= 50.0)
            .map(|(&t, &e)| (t, e));
        let slope = log_log_slope(window);
        eprintln!("max |H - H0| = {max_energy:.3e}; error growth slope past t = 50: {slope:.3}");
    }
    let mut sink = output::open_sink(cfg.out.as_deref())?;
    output::write_trajectory_csv(&mut sink, &problem, &trajectory)
        .map_err(|e| config_err(format!("write failed: {e}")))?;
    Ok(ExitCode::SUCCESS)
}
