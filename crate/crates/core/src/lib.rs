//! Construction toolkit for symplectic and symmetric Runge-Kutta methods
//! built from weighted orthogonal polynomial families.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`orthopoly`] — orthonormal polynomial families (Legendre, Laguerre,
//!    Hermite and shifted variants) on finite or infinite intervals.
//! 2. [`quadrature`] — Gauss–Christoffel rules (nodes, positive weights) for
//!    any family via Golub–Welsch.
//! 3. [`cstage`] — coefficient functions `B_τ` and `A_{τ,σ}` of a
//!    continuous-stage Runge-Kutta method, constructed so the symplectic
//!    condition holds structurally, with free parameters surfaced by a
//!    small linear solve.
//! 4. [`tableau`] — discretization of the coefficient functions into a
//!    standard Butcher tableau, plus symplecticity / symmetry / order
//!    verification and a set of named builtin methods.
//!
//! [`integrator`] advances initial value problems with the resulting
//! implicit tableaux (fixed-point or Newton stage solves) and with the
//! equivalent polynomial-stage formulation; [`problems`] ships the Kepler,
//! pendulum and scalar exponential test systems.
//!
//! # Example
//!
//! Build the 2-stage order-3 symplectic method from Legendre polynomials
//! and check the discrete symplecticity condition:
//!
//! ```
//! use std::collections::BTreeMap;
//! use csrk::{
//!     assemble_method, build_b, discretize, solve_symplectic_alpha,
//!     FamilyKind, PolynomialFamily, QuadratureRule, SimplifyingOrders,
//! };
//!
//! let family = PolynomialFamily::new(FamilyKind::Legendre);
//! let orders = SimplifyingOrders::new(3, 1, 2);
//! let solution = solve_symplectic_alpha(&family, orders, false)?;
//! assert_eq!(solution.free_params(), ["alpha(0,2)"]);
//!
//! let values = BTreeMap::from([("alpha(0,2)".to_string(), 0.0)]);
//! let b = build_b(&family, 3, &BTreeMap::new())?;
//! let method = assemble_method(&family, b, &solution, &values)?;
//!
//! let rule = QuadratureRule::gauss(&family, 2)?;
//! let tableau = discretize(&method, &rule)?;
//! assert!(tableau.symplectic_residual() < 1e-14);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cstage;
pub mod integrator;
pub mod orthopoly;
pub mod problems;
pub mod quadrature;
pub mod tableau;

pub use cstage::{
    assemble_method, build_b, param_name, solve_symplectic_alpha, AffineExpr, AlphaSolution,
    CsrkMethod, CstageError, SimplifyingOrders,
};
pub use integrator::{
    convergence_study, cs_poly_step, integrate, rk_step, ConvergenceStudy, IntegrateError,
    IvpProblem, SolveMode, StageSolveConfig, Trajectory,
};
pub use orthopoly::{FamilyKind, OrthopolyError, Polynomial, PolynomialFamily};
pub use quadrature::{QuadratureError, QuadratureRule};
pub use tableau::{
    builtin, builtin_with_points, discretize, predicted_rk_order, BuiltinMethod, ButcherTableau,
    TableauError, TableauMeta,
};
