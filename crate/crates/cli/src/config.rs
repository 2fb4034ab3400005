//! Run configuration: an optional JSON document overlaid by command-line
//! flags (flags win). Unknown keys in the document are rejected.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use csrk::{BuiltinMethod, ButcherTableau, CsrkMethod, SolveMode, StageSolveConfig};

/// Configuration error (exit code 2) or numerical failure (exit code 1).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

pub fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// All run settings; every field optional so JSON documents and flag sets
/// can each fill any subset.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub method: Option<String>,
    pub mu: Option<f64>,
    pub quad_points: Option<usize>,
    pub problem: Option<String>,
    pub h: Option<f64>,
    pub steps: Option<usize>,
    pub t_end: Option<f64>,
    pub h_list: Option<Vec<f64>>,
    pub solver: Option<String>,
    pub tol: Option<f64>,
    pub out: Option<String>,
}

impl RunConfig {
    /// Loads a JSON document, rejecting unknown keys.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
    }

    /// Overlays `flags` on `self`; flag values win.
    pub fn overlaid(mut self, flags: RunConfig) -> Self {
        macro_rules! take {
            ($field:ident) => {
                if flags.$field.is_some() {
                    self.$field = flags.$field;
                }
            };
        }
        take!(method);
        take!(mu);
        take!(quad_points);
        take!(problem);
        take!(h);
        take!(steps);
        take!(t_end);
        take!(h_list);
        take!(solver);
        take!(tol);
        take!(out);
        self
    }

    /// Resolves the method name, requiring `--mu` for the parametric
    /// families, and returns the tableau together with the underlying
    /// continuous-stage method and the effective parameter value.
    pub fn resolve_method(
        &self,
        default_method: Option<&str>,
        default_mu: Option<f64>,
    ) -> Result<ResolvedMethod, CliError> {
        let name_str = self
            .method
            .as_deref()
            .or(default_method)
            .ok_or_else(|| config_err("no method given; pass --method"))?;
        let name: BuiltinMethod = name_str
            .parse()
            .map_err(|_| config_err(format!("unknown method `{name_str}`")))?;
        let mu = match (self.mu.or(default_mu), name.parametric()) {
            (Some(mu), _) => mu,
            (None, false) => 0.0,
            (None, true) => {
                return Err(config_err(format!(
                    "method `{name}` has a free parameter; supply --mu"
                )))
            }
        };
        let points = self.quad_points.unwrap_or_else(|| name.quad_points());
        let method = name.csrk_method(mu);
        let rule = csrk::QuadratureRule::gauss(method.family(), points)
            .map_err(|e| config_err(format!("--quad-points: {e}")))?;
        let mut tableau =
            csrk::discretize(&method, &rule).map_err(|e| config_err(e.to_string()))?;
        tableau.meta = Some(csrk::TableauMeta {
            family: name.family_kind(),
            orders: method.orders(),
            mu: Some(mu),
            quad_points: points,
        });
        Ok(ResolvedMethod {
            name,
            mu,
            quad_points: points,
            method,
            tableau,
        })
    }

    /// Resolves the problem by name (default `kepler`).
    pub fn resolve_problem(&self) -> Result<csrk::IvpProblem, CliError> {
        let name = self.problem.as_deref().unwrap_or("kepler");
        csrk::problems::by_name(name).ok_or_else(|| {
            config_err(format!(
                "unknown problem `{name}` (expected one of {})",
                csrk::problems::PROBLEM_NAMES.join(", ")
            ))
        })
    }

    /// Resolves the stage solver configuration.
    pub fn resolve_solver(&self) -> Result<StageSolveConfig, CliError> {
        let mut cfg = StageSolveConfig::default();
        if let Some(solver) = self.solver.as_deref() {
            cfg.mode = match solver.replace('-', "_").as_str() {
                "fixed_point" => SolveMode::FixedPoint,
                "newton" => SolveMode::Newton,
                other => {
                    return Err(config_err(format!(
                        "unknown solver `{other}` (expected fixed-point or newton)"
                    )))
                }
            };
        }
        if let Some(tol) = self.tol {
            if tol.is_nan() || tol <= 0.0 {
                return Err(config_err("--tol must be positive"));
            }
            cfg.tolerance = tol;
        }
        Ok(cfg)
    }

    /// Positive step size with a default.
    pub fn resolve_h(&self, default: f64) -> Result<f64, CliError> {
        let h = self.h.unwrap_or(default);
        if h.is_nan() || h <= 0.0 {
            return Err(config_err("--h must be positive"));
        }
        Ok(h)
    }

    /// Step count with a default.
    pub fn resolve_steps(&self, default: usize) -> Result<usize, CliError> {
        let steps = self.steps.unwrap_or(default);
        if steps == 0 {
            return Err(config_err("--steps must be at least 1"));
        }
        Ok(steps)
    }
}

/// A fully resolved method selection.
pub struct ResolvedMethod {
    pub name: BuiltinMethod,
    pub mu: f64,
    pub quad_points: usize,
    pub method: CsrkMethod,
    pub tableau: ButcherTableau,
}

/// Parses `--h 0.1,0.05,...` style lists.
pub fn parse_h_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| config_err(format!("step size `{part}`: {e}")))
        })
        .collect()
}
