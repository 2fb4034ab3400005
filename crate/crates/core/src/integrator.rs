//! Time integration with implicit Runge-Kutta tableaux and with the
//! polynomial-stage formulation of the underlying continuous-stage method.
//!
//! Stage systems are solved either by fixed-point sweeps (default) or by a
//! simplified Newton iteration whose finite-difference Jacobian is factored
//! once per step. The polynomial-stage solver expands the stage function in
//! the family basis and iterates on the expansion coefficients; with the
//! same quadrature rule it discretizes the same equations as the tableau
//! path and the two agree to rounding.

use thiserror::Error;

use crate::cstage::CsrkMethod;
use crate::quadrature::QuadratureRule;
use crate::tableau::ButcherTableau;

/// Errors from the steppers and drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    /// The stage iteration did not reach the increment tolerance.
    #[error(
        "stage iteration did not converge{} ({iterations} iterations, last increment {last_increment:.3e})",
        step.map(|s| format!(" at step {s}")).unwrap_or_default()
    )]
    NoConvergence {
        /// Failing step index, when raised from a multi-step driver.
        step: Option<usize>,
        iterations: usize,
        last_increment: f64,
    },
    /// The Newton matrix came out singular.
    #[error("singular stage Jacobian in the Newton solve")]
    SingularJacobian,
    /// Method and rule were built on different families.
    #[error("quadrature rule family does not match the method family")]
    FamilyMismatch,
    /// `integrate` needs at least one step.
    #[error("step count must be at least 1")]
    ZeroSteps,
    /// Bad step-size list for a convergence study.
    #[error("invalid step-size list: {0}")]
    InvalidStepSizes(String),
    /// A convergence study needs the problem's exact solution.
    #[error("problem provides no exact solution")]
    MissingExactSolution,
}

/// Nonlinear solver for the implicit stage equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Plain fixed-point sweeps over the stage values.
    FixedPoint,
    /// Simplified Newton with a finite-difference Jacobian, factored once
    /// per step.
    Newton,
}

/// Stage-solve configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageSolveConfig {
    /// Solver flavor.
    pub mode: SolveMode,
    /// Tolerance on the max-norm of the stage increment.
    pub tolerance: f64,
    /// Iteration budget.
    pub max_iterations: usize,
    /// Finite-difference step per component for the Newton Jacobian.
    pub fd_step: f64,
}

impl Default for StageSolveConfig {
    fn default() -> Self {
        Self {
            mode: SolveMode::FixedPoint,
            tolerance: 1e-14,
            max_iterations: 100,
            fd_step: 1e-7,
        }
    }
}

impl StageSolveConfig {
    /// Fixed-point solver with default tolerances.
    pub fn fixed_point() -> Self {
        Self::default()
    }

    /// Newton solver with default tolerances.
    pub fn newton() -> Self {
        Self {
            mode: SolveMode::Newton,
            ..Self::default()
        }
    }
}

type RhsFn = Box<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;
type ExactFn = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>;
type EnergyFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// An initial value problem `ż = f(t, z)`, `z(t₀) = z₀`, optionally with an
/// exact solution and a first integral for error diagnostics.
pub struct IvpProblem {
    dim: usize,
    t0: f64,
    z0: Vec<f64>,
    rhs: RhsFn,
    exact: Option<ExactFn>,
    energy: Option<EnergyFn>,
    labels: Vec<String>,
}

impl IvpProblem {
    /// Builds a problem from its right-hand side. Panics if `f(t₀, z₀)` is
    /// not finite.
    pub fn new(
        t0: f64,
        z0: Vec<f64>,
        rhs: impl Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        let dim = z0.len();
        let mut probe = vec![0.0; dim];
        rhs(t0, &z0, &mut probe);
        assert!(
            probe.iter().all(|v| v.is_finite()),
            "rhs not finite at the initial point"
        );
        let labels = (1..=dim).map(|i| format!("z{i}")).collect();
        Self {
            dim,
            t0,
            z0,
            rhs: Box::new(rhs),
            exact: None,
            energy: None,
            labels,
        }
    }

    /// Attaches the exact solution. Panics if it disagrees with `z₀` at
    /// `t₀` beyond 1e-12.
    pub fn with_exact(mut self, exact: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        let at_t0 = exact(self.t0);
        assert!(
            at_t0
                .iter()
                .zip(self.z0.iter())
                .all(|(a, b)| (a - b).abs() < 1e-12),
            "exact solution does not match z0 at t0"
        );
        self.exact = Some(Box::new(exact));
        self
    }

    /// Attaches a first integral (energy) for drift diagnostics.
    pub fn with_energy(mut self, energy: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.energy = Some(Box::new(energy));
        self
    }

    /// Names the state components (CSV headers).
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    /// State dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Initial time.
    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Initial state.
    pub fn z0(&self) -> &[f64] {
        &self.z0
    }

    /// Component labels.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Evaluates the right-hand side into `out`.
    pub fn eval_into(&self, t: f64, z: &[f64], out: &mut [f64]) {
        (self.rhs)(t, z, out);
    }

    /// Evaluates the right-hand side, allocating.
    pub fn eval(&self, t: f64, z: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, z, &mut out);
        out
    }

    /// Exact solution at `t`, when available.
    pub fn exact_at(&self, t: f64) -> Option<Vec<f64>> {
        self.exact.as_ref().map(|f| f(t))
    }

    /// First integral at `z`, when available.
    pub fn energy_at(&self, z: &[f64]) -> Option<f64> {
        self.energy.as_ref().map(|f| f(z))
    }
}

impl std::fmt::Debug for IvpProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IvpProblem")
            .field("dim", &self.dim)
            .field("t0", &self.t0)
            .field("z0", &self.z0)
            .field("exact", &self.exact.is_some())
            .field("energy", &self.energy.is_some())
            .finish()
    }
}

/// A fixed-step trajectory with optional error diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Time stamps `t₀ + n·h`.
    pub times: Vec<f64>,
    /// States per step.
    pub states: Vec<Vec<f64>>,
    /// `|H(z_n) - H(z₀)|` per step, when the problem has a first integral.
    pub energy_error: Option<Vec<f64>>,
    /// Euclidean distance to the exact solution per step, when available.
    pub solution_error: Option<Vec<f64>>,
}

/// Max that poisons on NaN instead of dropping it, so a blown-up iterate
/// can never report convergence.
fn nan_aware_max(acc: f64, v: f64) -> f64 {
    if v.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, nan_aware_max)
}

fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Advances one step of the implicit Runge-Kutta method `tab` from `(t, z)`
/// with step `h`. Stage values are initialized with the constant predictor
/// `Z_i = z`.
pub fn rk_step(
    tab: &ButcherTableau,
    problem: &IvpProblem,
    t: f64,
    z: &[f64],
    h: f64,
    cfg: &StageSolveConfig,
) -> Result<Vec<f64>, IntegrateError> {
    assert!(h != 0.0, "step size must be nonzero");
    let s = tab.stages();
    let d = problem.dim();
    let mut stages: Vec<Vec<f64>> = vec![z.to_vec(); s];
    let stage_times: Vec<f64> = tab.c.iter().map(|&c| t + c * h).collect();

    match cfg.mode {
        SolveMode::FixedPoint => {
            let mut f_vals: Vec<Vec<f64>> = vec![vec![0.0; d]; s];
            let mut converged = false;
            let mut last_increment = f64::INFINITY;
            let mut iterations = 0;
            for _ in 0..cfg.max_iterations {
                iterations += 1;
                for (i, f_val) in f_vals.iter_mut().enumerate() {
                    problem.eval_into(stage_times[i], &stages[i], f_val);
                }
                let mut increment: f64 = 0.0;
                for i in 0..s {
                    for p in 0..d {
                        let mut v = z[p];
                        for (j, f_val) in f_vals.iter().enumerate() {
                            v += h * tab.a[i][j] * f_val[p];
                        }
                        increment = nan_aware_max(increment, (v - stages[i][p]).abs());
                        stages[i][p] = v;
                    }
                }
                last_increment = increment;
                if increment < cfg.tolerance {
                    converged = true;
                    break;
                }
                if !increment.is_finite() {
                    break;
                }
            }
            if !converged {
                return Err(IntegrateError::NoConvergence {
                    step: None,
                    iterations,
                    last_increment,
                });
            }
        }
        SolveMode::Newton => {
            let jac = fd_jacobian(problem, t, z, cfg.fd_step);
            // M = I - h (A ⊗ J), factored once per step.
            let n = s * d;
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..s {
                for j in 0..s {
                    for p in 0..d {
                        for q in 0..d {
                            m[i * d + p][j * d + q] = -h * tab.a[i][j] * jac[p][q];
                        }
                    }
                }
            }
            for k in 0..n {
                m[k][k] += 1.0;
            }
            let lu = LuFactors::new(m).ok_or(IntegrateError::SingularJacobian)?;

            let mut f_vals: Vec<Vec<f64>> = vec![vec![0.0; d]; s];
            let mut residual = vec![0.0; n];
            let mut converged = false;
            let mut last_increment = f64::INFINITY;
            let mut iterations = 0;
            for _ in 0..cfg.max_iterations {
                iterations += 1;
                for (i, f_val) in f_vals.iter_mut().enumerate() {
                    problem.eval_into(stage_times[i], &stages[i], f_val);
                }
                for i in 0..s {
                    for p in 0..d {
                        let mut v = stages[i][p] - z[p];
                        for (j, f_val) in f_vals.iter().enumerate() {
                            v -= h * tab.a[i][j] * f_val[p];
                        }
                        residual[i * d + p] = -v;
                    }
                }
                let delta = lu.solve(&residual);
                let mut increment: f64 = 0.0;
                for i in 0..s {
                    for p in 0..d {
                        stages[i][p] += delta[i * d + p];
                        increment = nan_aware_max(increment, delta[i * d + p].abs());
                    }
                }
                last_increment = increment;
                if increment < cfg.tolerance {
                    converged = true;
                    break;
                }
                if !increment.is_finite() {
                    break;
                }
            }
            if !converged {
                return Err(IntegrateError::NoConvergence {
                    step: None,
                    iterations,
                    last_increment,
                });
            }
        }
    }

    let mut out = z.to_vec();
    let mut f_val = vec![0.0; d];
    for i in 0..s {
        problem.eval_into(stage_times[i], &stages[i], &mut f_val);
        for p in 0..d {
            out[p] += h * tab.b[i] * f_val[p];
        }
    }
    Ok(out)
}

/// Integrates `n_steps` uniform steps of size `h`, collecting per-step
/// energy and solution errors when the problem provides them.
pub fn integrate(
    tab: &ButcherTableau,
    problem: &IvpProblem,
    h: f64,
    n_steps: usize,
    cfg: &StageSolveConfig,
) -> Result<Trajectory, IntegrateError> {
    if n_steps == 0 {
        return Err(IntegrateError::ZeroSteps);
    }
    let t0 = problem.t0();
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(t0);
    states.push(problem.z0().to_vec());
    let mut z = problem.z0().to_vec();
    for n in 0..n_steps {
        let t = t0 + n as f64 * h;
        z = rk_step(tab, problem, t, &z, h, cfg).map_err(|e| match e {
            IntegrateError::NoConvergence {
                iterations,
                last_increment,
                ..
            } => IntegrateError::NoConvergence {
                step: Some(n),
                iterations,
                last_increment,
            },
            other => other,
        })?;
        times.push(t0 + (n + 1) as f64 * h);
        states.push(z.clone());
    }

    let energy_error = problem.energy_at(problem.z0()).map(|h0| {
        states
            .iter()
            .map(|z| (problem.energy_at(z).unwrap() - h0).abs())
            .collect()
    });
    let solution_error = problem.exact_at(t0).map(|_| {
        times
            .iter()
            .zip(states.iter())
            .map(|(&t, z)| euclidean_distance(z, &problem.exact_at(t).unwrap()))
            .collect()
    });
    Ok(Trajectory {
        times,
        states,
        energy_error,
        solution_error,
    })
}

/// Advances one step of the continuous-stage method in its polynomial-stage
/// form: the stage function is expanded as `Z_τ = Σ γ_i P_i(τ)` and the
/// expansion coefficients are iterated on, using the quadrature rule to
/// evaluate the stage integral. With the same rule this is the same
/// discretization as [`rk_step`] on the corresponding tableau.
pub fn cs_poly_step(
    method: &CsrkMethod,
    rule: &QuadratureRule,
    problem: &IvpProblem,
    t: f64,
    z: &[f64],
    h: f64,
    cfg: &StageSolveConfig,
) -> Result<Vec<f64>, IntegrateError> {
    if method.family().kind() != rule.family().kind() {
        return Err(IntegrateError::FamilyMismatch);
    }
    let d = problem.dim();
    let s = rule.points();
    let nodes = rule.nodes();
    let weights = rule.weights();
    let degree = method.a_tau_degree();
    let n_coeff = degree + 1;

    // Expansion of A_{τ, c_m} in the τ basis, one coefficient row per node.
    let a_coeffs: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&c| method.a_tau_coefficients(c))
        .collect();
    // Basis values P_i(c_m) to evaluate Z at the nodes.
    let basis_at_nodes: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&c| method.family().eval_upto(degree, c))
        .collect();
    let p0 = method.family().eval(0, 0.0);
    let stage_times: Vec<f64> = nodes.iter().map(|&c| t + c * h).collect();

    // γ_0 carries z / P_0, higher coefficients start at zero.
    let mut gamma: Vec<Vec<f64>> = vec![vec![0.0; d]; n_coeff];
    for p in 0..d {
        gamma[0][p] = z[p] / p0;
    }

    let eval_stages = |gamma: &[Vec<f64>]| -> Vec<Vec<f64>> {
        basis_at_nodes
            .iter()
            .map(|basis| {
                (0..d)
                    .map(|p| {
                        basis
                            .iter()
                            .zip(gamma.iter())
                            .map(|(&pv, g)| pv * g[p])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    };

    let project = |f_vals: &[Vec<f64>], out: &mut [Vec<f64>]| {
        for (i, g) in out.iter_mut().enumerate() {
            for p in 0..d {
                let mut v = if i == 0 { z[p] / p0 } else { 0.0 };
                for m in 0..s {
                    v += h * weights[m] * a_coeffs[m][i] * f_vals[m][p];
                }
                g[p] = v;
            }
        }
    };

    match cfg.mode {
        SolveMode::FixedPoint => {
            let mut next = vec![vec![0.0; d]; n_coeff];
            let mut f_vals = vec![vec![0.0; d]; s];
            let mut converged = false;
            let mut last_increment = f64::INFINITY;
            let mut iterations = 0;
            for _ in 0..cfg.max_iterations {
                iterations += 1;
                let stage_values = eval_stages(&gamma);
                for (m, f_val) in f_vals.iter_mut().enumerate() {
                    problem.eval_into(stage_times[m], &stage_values[m], f_val);
                }
                project(&f_vals, &mut next);
                let mut increment: f64 = 0.0;
                for (g, n) in gamma.iter_mut().zip(next.iter()) {
                    increment = nan_aware_max(increment, max_abs_diff(g, n));
                    g.copy_from_slice(n);
                }
                last_increment = increment;
                if increment < cfg.tolerance {
                    converged = true;
                    break;
                }
                if !increment.is_finite() {
                    break;
                }
            }
            if !converged {
                return Err(IntegrateError::NoConvergence {
                    step: None,
                    iterations,
                    last_increment,
                });
            }
        }
        SolveMode::Newton => {
            // γ residual Jacobian: I - h Σ_m w_m a_coeffs[m][i] P_l(c_m) J.
            let jac = fd_jacobian(problem, t, z, cfg.fd_step);
            let n = n_coeff * d;
            let mut m_mat = vec![vec![0.0; n]; n];
            for i in 0..n_coeff {
                for l in 0..n_coeff {
                    let mut coupling = 0.0;
                    for m in 0..s {
                        coupling += weights[m] * a_coeffs[m][i] * basis_at_nodes[m][l];
                    }
                    for p in 0..d {
                        for q in 0..d {
                            m_mat[i * d + p][l * d + q] = -h * coupling * jac[p][q];
                        }
                    }
                }
            }
            for k in 0..n {
                m_mat[k][k] += 1.0;
            }
            let lu = LuFactors::new(m_mat).ok_or(IntegrateError::SingularJacobian)?;

            let mut f_vals = vec![vec![0.0; d]; s];
            let mut target = vec![vec![0.0; d]; n_coeff];
            let mut residual = vec![0.0; n];
            let mut converged = false;
            let mut last_increment = f64::INFINITY;
            let mut iterations = 0;
            for _ in 0..cfg.max_iterations {
                iterations += 1;
                let stage_values = eval_stages(&gamma);
                for (m, f_val) in f_vals.iter_mut().enumerate() {
                    problem.eval_into(stage_times[m], &stage_values[m], f_val);
                }
                project(&f_vals, &mut target);
                for i in 0..n_coeff {
                    for p in 0..d {
                        residual[i * d + p] = target[i][p] - gamma[i][p];
                    }
                }
                let delta = lu.solve(&residual);
                let mut increment: f64 = 0.0;
                for i in 0..n_coeff {
                    for p in 0..d {
                        gamma[i][p] += delta[i * d + p];
                        increment = nan_aware_max(increment, delta[i * d + p].abs());
                    }
                }
                last_increment = increment;
                if increment < cfg.tolerance {
                    converged = true;
                    break;
                }
                if !increment.is_finite() {
                    break;
                }
            }
            if !converged {
                return Err(IntegrateError::NoConvergence {
                    step: None,
                    iterations,
                    last_increment,
                });
            }
        }
    }

    let stage_values = eval_stages(&gamma);
    let mut out = z.to_vec();
    let mut f_val = vec![0.0; d];
    for m in 0..s {
        problem.eval_into(stage_times[m], &stage_values[m], &mut f_val);
        let bw = weights[m] * method.b_at(nodes[m]);
        for p in 0..d {
            out[p] += h * bw * f_val[p];
        }
    }
    Ok(out)
}

/// Result of a step-halving convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    /// `(h, final solution error)` pairs, in the order supplied.
    pub samples: Vec<(f64, f64)>,
    /// Least-squares slope of `log(error)` against `log(h)`.
    pub slope: f64,
}

/// Integrates to `t_end` for every step size in `h_list` (descending, each
/// halving the previous, at least four) and fits the empirical order.
pub fn convergence_study(
    tab: &ButcherTableau,
    problem: &IvpProblem,
    t_end: f64,
    h_list: &[f64],
    cfg: &StageSolveConfig,
) -> Result<ConvergenceStudy, IntegrateError> {
    if problem.exact_at(problem.t0()).is_none() {
        return Err(IntegrateError::MissingExactSolution);
    }
    if h_list.len() < 4 {
        return Err(IntegrateError::InvalidStepSizes(format!(
            "need at least 4 step sizes, got {}",
            h_list.len()
        )));
    }
    for pair in h_list.windows(2) {
        if (pair[1] - pair[0] / 2.0).abs() > 1e-9 * pair[0] {
            return Err(IntegrateError::InvalidStepSizes(format!(
                "{} does not halve {}",
                pair[1], pair[0]
            )));
        }
    }
    let mut samples = Vec::with_capacity(h_list.len());
    for &h in h_list {
        if h <= 0.0 {
            return Err(IntegrateError::InvalidStepSizes(
                "h must be positive".into(),
            ));
        }
        let steps_f = t_end / h;
        let n_steps = steps_f.round() as usize;
        if n_steps == 0 || (steps_f - n_steps as f64).abs() > 1e-9 {
            return Err(IntegrateError::InvalidStepSizes(format!(
                "t_end = {t_end} is not an integer multiple of h = {h}"
            )));
        }
        let trajectory = integrate(tab, problem, h, n_steps, cfg)?;
        let error = *trajectory.solution_error.as_ref().unwrap().last().unwrap();
        samples.push((h, error));
    }
    let slope = log_log_slope(samples.iter().map(|&(h, e)| (h, e)));
    Ok(ConvergenceStudy { samples, slope })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let logs: Vec<(f64, f64)> = points.map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    sxy / sxx
}

/// Forward-difference Jacobian of the right-hand side at `(t, z)`.
fn fd_jacobian(problem: &IvpProblem, t: f64, z: &[f64], step: f64) -> Vec<Vec<f64>> {
    let d = problem.dim();
    let mut base = vec![0.0; d];
    problem.eval_into(t, z, &mut base);
    let mut jac = vec![vec![0.0; d]; d];
    let mut perturbed = z.to_vec();
    let mut out = vec![0.0; d];
    for q in 0..d {
        let saved = perturbed[q];
        perturbed[q] += step;
        problem.eval_into(t, &perturbed, &mut out);
        for p in 0..d {
            jac[p][q] = (out[p] - base[p]) / step;
        }
        perturbed[q] = saved;
    }
    jac
}

/// Dense LU with partial pivoting for the small Newton systems.
struct LuFactors {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl LuFactors {
    fn new(mut m: Vec<Vec<f64>>) -> Option<Self> {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot_row =
                (k..n).max_by(|&a, &b| m[a][k].abs().partial_cmp(&m[b][k].abs()).unwrap())?;
            if m[pivot_row][k].abs() < 1e-300 {
                return None;
            }
            m.swap(k, pivot_row);
            perm.swap(k, pivot_row);
            for i in k + 1..n {
                let factor = m[i][k] / m[k][k];
                m[i][k] = factor;
                for j in k + 1..n {
                    m[i][j] -= factor * m[k][j];
                }
            }
        }
        Some(Self { lu: m, perm })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[i][j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i][j] * x[j];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}
