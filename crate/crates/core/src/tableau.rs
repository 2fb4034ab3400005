//! Butcher tableaux discretized from continuous-stage methods.
//!
//! Applying an `s`-point Gauss–Christoffel rule `(c_i, w_i)` to the
//! coefficient functions yields a conventional `s`-stage Runge-Kutta method
//! with `a_{ij} = w_j · A_{c_i, c_j}` and `b_i = w_i · B_{c_i}`. This module
//! also verifies symplecticity, symmetry and the rooted-tree order
//! conditions through order 4, and exposes the builtin method families.
//! Builtins are always constructed through the full pipeline, never
//! transcribed.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cstage::{
    assemble_method, build_b, solve_symplectic_alpha, CsrkMethod, SimplifyingOrders,
};
use crate::orthopoly::FamilyKind;
use crate::orthopoly::PolynomialFamily;
use crate::quadrature::QuadratureRule;

/// Residual threshold below which an order condition counts as satisfied.
pub const ORDER_CONDITION_TOL: f64 = 1e-10;

/// Errors from discretization and tableau parsing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableauError {
    /// The rule was built for a different family than the method.
    #[error("quadrature family {rule:?} does not match method family {method:?}")]
    FamilyMismatch {
        method: FamilyKind,
        rule: FamilyKind,
    },
    /// Unknown builtin name.
    #[error("unknown method name `{0}`")]
    UnknownName(String),
    /// Malformed flat-format input.
    #[error("flat tableau parse error: {0}")]
    Parse(String),
}

/// Provenance of a pipeline-built tableau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableauMeta {
    /// Family the coefficient functions were built on.
    pub family: FamilyKind,
    /// Simplifying-assumption orders of the source method.
    pub orders: SimplifyingOrders,
    /// Value substituted for the free parameter, if the family has one.
    pub mu: Option<f64>,
    /// Point count of the discretizing rule.
    pub quad_points: usize,
}

/// A standard `s`-stage Runge-Kutta tableau `(c, A, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    /// Abscissae.
    pub c: Vec<f64>,
    /// Stage matrix, row major.
    pub a: Vec<Vec<f64>>,
    /// Weights.
    pub b: Vec<f64>,
    /// Provenance, when built through the pipeline.
    pub meta: Option<TableauMeta>,
}

impl ButcherTableau {
    /// Packs a tableau, validating the dimensions.
    pub fn new(c: Vec<f64>, a: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        let s = c.len();
        assert_eq!(b.len(), s, "b must have one weight per stage");
        assert_eq!(a.len(), s, "A must be square");
        assert!(a.iter().all(|row| row.len() == s), "A must be square");
        Self {
            c,
            a,
            b,
            meta: None,
        }
    }

    /// Stage count.
    pub fn stages(&self) -> usize {
        self.c.len()
    }

    /// Max residual of the algebraic symplecticity condition
    /// `b_i a_{ij} + b_j a_{ji} - b_i b_j = 0`.
    pub fn symplectic_residual(&self) -> f64 {
        let s = self.stages();
        let mut worst: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                let m = self.b[i] * self.a[i][j] + self.b[j] * self.a[j][i] - self.b[i] * self.b[j];
                worst = worst.max(m.abs());
            }
        }
        worst
    }

    /// Max residual over the discrete symmetry conditions: palindromic
    /// weights `b_{s+1-i} = b_i`, reflective abscissae `c_{s+1-i} = 1 - c_i`
    /// and the adjoint relation `a_{ij} + a_{s+1-i, s+1-j} = b_j`.
    pub fn symmetric_residual(&self) -> f64 {
        let s = self.stages();
        let mut worst: f64 = 0.0;
        for i in 0..s {
            let ri = s - 1 - i;
            worst = worst.max((self.b[ri] - self.b[i]).abs());
            worst = worst.max((self.c[ri] - (1.0 - self.c[i])).abs());
            for j in 0..s {
                let rj = s - 1 - j;
                worst = worst.max((self.a[i][j] + self.a[ri][rj] - self.b[j]).abs());
            }
        }
        worst
    }

    /// Evaluates the rooted-tree order conditions through order `p ≤ 4` and
    /// reports the largest order with every residual below
    /// [`ORDER_CONDITION_TOL`].
    pub fn order_conditions(&self, p: usize) -> OrderReport {
        assert!(
            (1..=4).contains(&p),
            "order conditions implemented through 4"
        );
        let s = self.stages();
        let c = &self.c;
        let b = &self.b;
        let ac: Vec<f64> = (0..s)
            .map(|i| (0..s).map(|j| self.a[i][j] * c[j]).sum())
            .collect();
        let ac2: Vec<f64> = (0..s)
            .map(|i| (0..s).map(|j| self.a[i][j] * c[j] * c[j]).sum())
            .collect();
        let aac: Vec<f64> = (0..s)
            .map(|i| (0..s).map(|j| self.a[i][j] * ac[j]).sum())
            .collect();
        let dot = |x: &dyn Fn(usize) -> f64| -> f64 { (0..s).map(|i| b[i] * x(i)).sum() };

        let all: [(usize, &'static str, f64); 8] = [
            (1, "sum(b) = 1", dot(&|_| 1.0) - 1.0),
            (2, "sum(b c) = 1/2", dot(&|i| c[i]) - 0.5),
            (3, "sum(b c^2) = 1/3", dot(&|i| c[i] * c[i]) - 1.0 / 3.0),
            (3, "sum(b A c) = 1/6", dot(&|i| ac[i]) - 1.0 / 6.0),
            (4, "sum(b c^3) = 1/4", dot(&|i| c[i].powi(3)) - 0.25),
            (4, "sum(b c A c) = 1/8", dot(&|i| c[i] * ac[i]) - 0.125),
            (4, "sum(b A c^2) = 1/12", dot(&|i| ac2[i]) - 1.0 / 12.0),
            (4, "sum(b A A c) = 1/24", dot(&|i| aac[i]) - 1.0 / 24.0),
        ];
        let conditions: Vec<OrderCondition> = all
            .iter()
            .filter(|(order, _, _)| *order <= p)
            .map(|&(order, label, residual)| OrderCondition {
                order,
                label,
                residual: residual.abs(),
            })
            .collect();
        let mut satisfied_through = 0;
        for q in 1..=p {
            if conditions
                .iter()
                .filter(|c| c.order == q)
                .all(|c| c.residual < ORDER_CONDITION_TOL)
            {
                satisfied_through = q;
            } else {
                break;
            }
        }
        OrderReport {
            conditions,
            satisfied_through,
        }
    }

    /// Human-readable Butcher block: `c` column, bar, `A` matrix, then the
    /// `b` row under a rule.
    pub fn to_block_string(&self) -> String {
        let s = self.stages();
        let width = 25;
        let mut out = String::new();
        for i in 0..s {
            out.push_str(&format!("{:>width$} |", fmt_g17(self.c[i])));
            for j in 0..s {
                out.push_str(&format!(" {:>width$}", fmt_g17(self.a[i][j])));
            }
            out.push('\n');
        }
        out.push_str(&format!("{:->width$}-+", ""));
        out.push_str(&format!("{:->rest$}\n", "", rest = (width + 1) * s));
        out.push_str(&format!("{:>width$} |", ""));
        for j in 0..s {
            out.push_str(&format!(" {:>width$}", fmt_g17(self.b[j])));
        }
        out.push('\n');
        out
    }

    /// Machine-readable flat format: `s`, then `c_1..c_s`, then `A` row
    /// major, then `b_1..b_s`, one value per line, 17 significant digits.
    pub fn to_flat_string(&self) -> String {
        let s = self.stages();
        let mut lines = Vec::with_capacity(1 + s * (s + 2));
        lines.push(s.to_string());
        lines.extend(self.c.iter().map(|&v| fmt_g17(v)));
        for row in &self.a {
            lines.extend(row.iter().map(|&v| fmt_g17(v)));
        }
        lines.extend(self.b.iter().map(|&v| fmt_g17(v)));
        lines.join("\n") + "\n"
    }

    /// Parses the flat format back; 17 significant digits round-trip
    /// doubles bit-identically. Blank lines and `#` comments are skipped.
    pub fn from_flat_str(text: &str) -> Result<Self, TableauError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let s: usize = lines
            .next()
            .ok_or_else(|| TableauError::Parse("empty input".into()))?
            .parse()
            .map_err(|e| TableauError::Parse(format!("stage count: {e}")))?;
        if s == 0 {
            return Err(TableauError::Parse("stage count must be positive".into()));
        }
        let mut values = Vec::with_capacity(s * (s + 2));
        for line in lines {
            let v: f64 = line
                .parse()
                .map_err(|e| TableauError::Parse(format!("value `{line}`: {e}")))?;
            values.push(v);
        }
        if values.len() != s * (s + 2) {
            return Err(TableauError::Parse(format!(
                "expected {} values for s = {s}, got {}",
                s * (s + 2),
                values.len()
            )));
        }
        let c = values[..s].to_vec();
        let a = (0..s)
            .map(|i| values[s + i * s..s + (i + 1) * s].to_vec())
            .collect();
        let b = values[s + s * s..].to_vec();
        Ok(ButcherTableau::new(c, a, b))
    }
}

/// One rooted-tree order condition and its residual.
#[derive(Debug, Clone)]
pub struct OrderCondition {
    /// Order the condition belongs to.
    pub order: usize,
    /// Condition label.
    pub label: &'static str,
    /// Absolute residual.
    pub residual: f64,
}

/// Order-condition report from [`ButcherTableau::order_conditions`].
#[derive(Debug, Clone)]
pub struct OrderReport {
    /// Per-condition residuals, grouped by order.
    pub conditions: Vec<OrderCondition>,
    /// Largest `q` with every condition of order `≤ q` satisfied.
    pub satisfied_through: usize,
}

/// 17-significant-digit formatting (round-trips `f64` exactly).
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Discretizes a continuous-stage method with a quadrature rule of the same
/// family: `c = nodes`, `a_{ij} = w_j · A_{c_i, c_j}`, `b_i = w_i · B_{c_i}`.
pub fn discretize(
    method: &CsrkMethod,
    rule: &QuadratureRule,
) -> Result<ButcherTableau, TableauError> {
    if method.family().kind() != rule.family().kind() {
        return Err(TableauError::FamilyMismatch {
            method: method.family().kind(),
            rule: rule.family().kind(),
        });
    }
    let nodes = rule.nodes();
    let weights = rule.weights();
    let s = nodes.len();
    let c = nodes.to_vec();
    let b: Vec<f64> = (0..s).map(|i| weights[i] * method.b_at(nodes[i])).collect();
    let a: Vec<Vec<f64>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| weights[j] * method.a_at(nodes[i], nodes[j]))
                .collect()
        })
        .collect();
    Ok(ButcherTableau {
        c,
        a,
        b,
        meta: None,
    })
}

/// Order lower bound of the discretized method: `min(ρ, 2α + 2, α + β + 1)`
/// with `ρ = min(ξ, p - π_B)`, `α = min(η, p - π_A^σ)` and
/// `β = min(ζ, p - π_A^τ - π_B)`, where `p` is the quadrature order and the
/// `π`s are the polynomial degrees of the coefficient functions.
pub fn predicted_rk_order(
    orders: SimplifyingOrders,
    quad_order: usize,
    deg_b: usize,
    deg_a_tau: usize,
    deg_a_sigma: usize,
) -> usize {
    let p = quad_order as i64;
    let rho = (orders.xi as i64).min(p - deg_b as i64);
    let alpha = (orders.eta as i64).min(p - deg_a_sigma as i64);
    let beta = (orders.zeta as i64).min(p - deg_a_tau as i64 - deg_b as i64);
    rho.min(2 * alpha + 2).min(alpha + beta + 1).max(0) as usize
}

/// The named method families shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinMethod {
    /// 2-stage order-3 symplectic method on Legendre `[-1, 1]`
    /// (parameter-free: the free direction drops out at 2 points).
    Legendre3S2,
    /// 3-stage order-3 symplectic family on Legendre `[-1, 1]`.
    Legendre3S3,
    /// 2-stage order-2 symplectic family on Laguerre `[0, ∞)`.
    Laguerre2S2,
    /// 3-stage order-3 symplectic family on Hermite `(-∞, ∞)`.
    Hermite3S3,
    /// 3-stage order-4 symmetric and symplectic family on shifted Hermite.
    Hermite4SymS3,
}

impl BuiltinMethod {
    /// All builtins, in table order.
    pub const ALL: [BuiltinMethod; 5] = [
        BuiltinMethod::Legendre3S2,
        BuiltinMethod::Legendre3S3,
        BuiltinMethod::Laguerre2S2,
        BuiltinMethod::Hermite3S3,
        BuiltinMethod::Hermite4SymS3,
    ];

    /// Stable name used by the CLI.
    pub fn name(self) -> &'static str {
        match self {
            BuiltinMethod::Legendre3S2 => "legendre3_s2",
            BuiltinMethod::Legendre3S3 => "legendre3_s3",
            BuiltinMethod::Laguerre2S2 => "laguerre2_s2",
            BuiltinMethod::Hermite3S3 => "hermite3_s3",
            BuiltinMethod::Hermite4SymS3 => "hermite4_sym_s3",
        }
    }

    /// Polynomial family of the method.
    pub fn family_kind(self) -> FamilyKind {
        match self {
            BuiltinMethod::Legendre3S2 | BuiltinMethod::Legendre3S3 => FamilyKind::Legendre,
            BuiltinMethod::Laguerre2S2 => FamilyKind::Laguerre,
            BuiltinMethod::Hermite3S3 => FamilyKind::Hermite,
            BuiltinMethod::Hermite4SymS3 => FamilyKind::ShiftedHermite,
        }
    }

    /// Canonical point count of the discretizing rule.
    pub fn quad_points(self) -> usize {
        match self {
            BuiltinMethod::Legendre3S2 | BuiltinMethod::Laguerre2S2 => 2,
            _ => 3,
        }
    }

    /// Whether the reflection-symmetric construction is used.
    pub fn symmetric(self) -> bool {
        matches!(self, BuiltinMethod::Hermite4SymS3)
    }

    /// Whether the tableau actually depends on the free parameter.
    pub fn parametric(self) -> bool {
        !matches!(self, BuiltinMethod::Legendre3S2)
    }

    /// Order claimed for the method family.
    pub fn claimed_order(self) -> usize {
        match self {
            BuiltinMethod::Laguerre2S2 => 2,
            BuiltinMethod::Hermite4SymS3 => 4,
            _ => 3,
        }
    }

    /// The underlying continuous-stage method at parameter `mu`
    /// (`ξ = 3, η = 1, ρ = 2` throughout).
    pub fn csrk_method(self, mu: f64) -> CsrkMethod {
        let family = PolynomialFamily::new(self.family_kind());
        let orders = SimplifyingOrders::new(3, 1, 2);
        let solution = solve_symplectic_alpha(&family, orders, self.symmetric())
            .expect("builtin orders are solvable");
        let names = solution.free_params();
        assert_eq!(names.len(), 1, "builtin families carry one free parameter");
        let mu = if self.parametric() { mu } else { 0.0 };
        let values = std::collections::BTreeMap::from([(names[0].clone(), mu)]);
        let b = build_b(&family, orders.xi, &std::collections::BTreeMap::new())
            .expect("builtin B coefficients");
        assemble_method(&family, b, &solution, &values).expect("builtin assembly")
    }
}

impl FromStr for BuiltinMethod {
    type Err = TableauError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| TableauError::UnknownName(s.to_string()))
    }
}

impl fmt::Display for BuiltinMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs the full pipeline for a builtin at parameter `mu` and discretizes
/// with its canonical rule. `mu` is ignored for `legendre3_s2`.
///
/// ```
/// use csrk::{builtin, BuiltinMethod};
///
/// let tableau = builtin(BuiltinMethod::Hermite4SymS3, 0.0);
/// assert_eq!(tableau.stages(), 3);
/// assert!(tableau.symplectic_residual() < 1e-14);
/// assert!(tableau.symmetric_residual() < 1e-13);
/// assert_eq!(tableau.order_conditions(4).satisfied_through, 4);
/// ```
pub fn builtin(name: BuiltinMethod, mu: f64) -> ButcherTableau {
    builtin_with_points(name, mu, name.quad_points())
}

/// Same as [`builtin`] with an explicit discretization point count.
/// `legendre3_s2` keeps its parameter pinned to zero even when a larger
/// rule would resolve it.
pub fn builtin_with_points(name: BuiltinMethod, mu: f64, points: usize) -> ButcherTableau {
    let method = name.csrk_method(mu);
    let rule = QuadratureRule::gauss(method.family(), points).expect("builtin rule point count");
    let mut tableau = discretize(&method, &rule).expect("families match by construction");
    tableau.meta = Some(TableauMeta {
        family: name.family_kind(),
        orders: method.orders(),
        mu: if name.parametric() {
            Some(mu)
        } else {
            Some(0.0)
        },
        quad_points: points,
    });
    tableau
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn legendre3_s2_matches_published_entries() {
        let t = builtin(BuiltinMethod::Legendre3S2, 123.456); // mu ignored
        let r3 = 3f64.sqrt();
        assert_abs_diff_eq!(t.c[0], -r3 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.a[0][0], (2.0 - r3) / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.a[0][1], (-6.0 - 5.0 * r3) / 24.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.a[1][0], (-6.0 + 5.0 * r3) / 24.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.a[1][1], (2.0 + r3) / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.b[0], (2.0 - r3) / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.b[1], (2.0 + r3) / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn laguerre2_s2_matches_published_entries_at_mu_zero() {
        let t = builtin(BuiltinMethod::Laguerre2S2, 0.0);
        let r2 = 2f64.sqrt();
        assert_abs_diff_eq!(t.a[0][1], (28.0 - 19.0 * r2) / 16.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[0], (4.0 + 3.0 * r2) / 8.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[1], (4.0 - 3.0 * r2) / 8.0, epsilon = 1e-13);
    }

    #[test]
    fn hermite4_sym_s3_matches_published_entries_at_mu_zero() {
        let t = builtin(BuiltinMethod::Hermite4SymS3, 0.0);
        let r6 = 6f64.sqrt();
        assert_abs_diff_eq!(t.a[0][0], 1.0 / 18.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.a[0][1], (14.0 - 21.0 * r6) / 36.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[0], 1.0 / 9.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[1], 7.0 / 9.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[2], 1.0 / 9.0, epsilon = 1e-13);
    }

    #[test]
    fn legendre3_s3_spot_entries() {
        let t = builtin(BuiltinMethod::Legendre3S3, 0.0);
        let r15 = 15f64.sqrt();
        assert_abs_diff_eq!(t.a[1][1], 2.0 / 9.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[0], (10.0 - 3.0 * r15) / 36.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[1], 4.0 / 9.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[2], (10.0 + 3.0 * r15) / 36.0, epsilon = 1e-13);
    }

    #[test]
    fn hermite3_s3_spot_entries() {
        let t = builtin(BuiltinMethod::Hermite3S3, 0.0);
        let r6 = 6f64.sqrt();
        assert_abs_diff_eq!(t.b[0], (4.0 - 3.0 * r6) / 36.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[1], 7.0 / 9.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.b[2], (4.0 + 3.0 * r6) / 36.0, epsilon = 1e-13);
    }

    #[test]
    fn symplectic_residual_detects_perturbation() {
        let mut t = builtin(BuiltinMethod::Legendre3S2, 0.0);
        assert!(t.symplectic_residual() < 1e-14);
        t.a[0][0] += 1e-3;
        assert!(t.symplectic_residual() > 1e-5);
    }

    #[test]
    fn symplectic_residual_across_mu() {
        let t = builtin(BuiltinMethod::Legendre3S3, 0.7);
        assert!(t.symplectic_residual() < 1e-14);
    }

    #[test]
    fn symmetric_residual_classification() {
        let t5 = builtin(BuiltinMethod::Hermite4SymS3, 0.3);
        assert!(t5.symmetric_residual() < 1e-13);

        // c = ∓√3/3 sums to 0, not 1: fails by |c_1 + c_2 - 1| = 1.
        let t1 = builtin(BuiltinMethod::Legendre3S2, 0.0);
        assert!(t1.symmetric_residual() >= 1.0 - 1e-12);

        // Laguerre abscissae live on [0, ∞): c_1 + c_2 = 4.
        let t3 = builtin(BuiltinMethod::Laguerre2S2, 0.0);
        assert!(t3.symmetric_residual() > 1.0);
    }

    #[test]
    fn order_conditions_per_builtin() {
        let t1 = builtin(BuiltinMethod::Legendre3S2, 0.0);
        let report = t1.order_conditions(4);
        assert_eq!(report.satisfied_through, 3);
        // The bushy order-4 condition evaluates to 1/6, off by 1/12.
        let bushy = report
            .conditions
            .iter()
            .find(|c| c.label.contains("c^3"))
            .unwrap();
        assert_abs_diff_eq!(bushy.residual, 0.25 - 1.0 / 6.0, epsilon = 1e-12);

        let t5 = builtin(BuiltinMethod::Hermite4SymS3, -0.2);
        assert_eq!(t5.order_conditions(4).satisfied_through, 4);

        let t3 = builtin(BuiltinMethod::Laguerre2S2, 1.0);
        assert_eq!(t3.order_conditions(4).satisfied_through, 2);
    }

    #[test]
    fn row_sums_of_laguerre_follow_mu() {
        // Row sums equal c at mu = 0 and drift by mu·(∓3 + 2√2)/6 otherwise.
        let r2 = 2f64.sqrt();
        let t0 = builtin(BuiltinMethod::Laguerre2S2, 0.0);
        for i in 0..2 {
            let sum: f64 = t0.a[i].iter().sum();
            assert_abs_diff_eq!(sum, t0.c[i], epsilon = 1e-13);
        }
        let mu = 0.8;
        let t = builtin(BuiltinMethod::Laguerre2S2, mu);
        let drift0: f64 = t.a[0].iter().sum::<f64>() - t.c[0];
        let drift1: f64 = t.a[1].iter().sum::<f64>() - t.c[1];
        assert_abs_diff_eq!(drift0, mu * (-3.0 + 2.0 * r2) / 6.0, epsilon = 1e-13);
        assert_abs_diff_eq!(drift1, -mu * (3.0 + 2.0 * r2) / 6.0, epsilon = 1e-13);
    }

    #[test]
    fn weights_sum_to_one() {
        for name in BuiltinMethod::ALL {
            let t = builtin(name, -1.3);
            let total: f64 = t.b.iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn row_sums_equal_abscissae_when_quadrature_resolves_a() {
        // Holds whenever the rule is exact for A(c_i, ·)·w, i.e. for every
        // builtin except the Laguerre family away from mu = 0.
        for name in [
            BuiltinMethod::Legendre3S2,
            BuiltinMethod::Legendre3S3,
            BuiltinMethod::Hermite3S3,
            BuiltinMethod::Hermite4SymS3,
        ] {
            let t = builtin(name, 0.83);
            for i in 0..t.stages() {
                let sum: f64 = t.a[i].iter().sum();
                assert_abs_diff_eq!(sum, t.c[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn predicted_rk_order_examples() {
        let orders = SimplifyingOrders::with_zeta(3, 1, 1, 2);
        assert_eq!(predicted_rk_order(orders, 4, 1, 2, 3), 3);
        assert_eq!(predicted_rk_order(orders, 4, 2, 2, 4), 1);
        let degenerate = SimplifyingOrders::with_zeta(3, 1, 0, 2);
        assert_eq!(predicted_rk_order(degenerate, 4, 1, 2, 3), 2);
    }

    #[test]
    fn higher_order_matching_recovers_gauss_collocation() {
        // With B ≡ 1 on the unit interval the construction pins down the
        // classical Gauss collocation methods uniquely.
        use crate::cstage::{assemble_method, build_b, solve_symplectic_alpha};
        use std::collections::BTreeMap;

        let family = PolynomialFamily::new(FamilyKind::ShiftedLegendre);
        let build = |xi: usize, eta: usize, rho: usize, s: usize| {
            let orders = SimplifyingOrders::new(xi, eta, rho);
            let solution = solve_symplectic_alpha(&family, orders, true).unwrap();
            assert!(solution.free_params().is_empty());
            let b = build_b(&family, xi, &BTreeMap::new()).unwrap();
            let method = assemble_method(&family, b, &solution, &BTreeMap::new()).unwrap();
            let rule = QuadratureRule::gauss(&family, s).unwrap();
            discretize(&method, &rule).unwrap()
        };

        let r3 = 3f64.sqrt();
        let gauss2 = build(4, 2, 2, 2);
        let expected2 = [
            [0.25, 0.25 - r3 / 6.0],
            [0.25 + r3 / 6.0, 0.25],
        ];
        for i in 0..2 {
            assert_abs_diff_eq!(gauss2.b[i], 0.5, epsilon = 1e-11);
            for j in 0..2 {
                assert_abs_diff_eq!(gauss2.a[i][j], expected2[i][j], epsilon = 1e-11);
            }
        }
        assert_eq!(gauss2.order_conditions(4).satisfied_through, 4);

        let r15 = 15f64.sqrt();
        let gauss3 = build(6, 3, 3, 3);
        let expected3 = [
            [5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0],
            [5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0],
            [5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0],
        ];
        let expected_b3 = [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0];
        for i in 0..3 {
            assert_abs_diff_eq!(gauss3.b[i], expected_b3[i], epsilon = 1e-11);
            for j in 0..3 {
                assert_abs_diff_eq!(gauss3.a[i][j], expected3[i][j], epsilon = 1e-11);
            }
        }
        assert_eq!(gauss3.order_conditions(4).satisfied_through, 4);
    }

    #[test]
    fn quad_point_override_bridges_the_legendre_builtins() {
        // legendre3_s2 stays pinned at mu = 0, so the bridge to the 3-point
        // family holds exactly there.
        let rediscretized = builtin_with_points(BuiltinMethod::Legendre3S2, 0.0, 3);
        let canonical = builtin(BuiltinMethod::Legendre3S3, 0.0);
        assert_eq!(rediscretized.c, canonical.c);
        assert_eq!(rediscretized.a, canonical.a);
        assert_eq!(rediscretized.b, canonical.b);
    }

    #[test]
    fn discretize_rejects_family_mismatch() {
        let method = BuiltinMethod::Legendre3S2.csrk_method(0.0);
        let rule = QuadratureRule::gauss(&PolynomialFamily::new(FamilyKind::Laguerre), 2).unwrap();
        assert!(matches!(
            discretize(&method, &rule),
            Err(TableauError::FamilyMismatch { .. })
        ));
    }

    #[test]
    fn b_weights_recompute_from_rule_and_method() {
        for name in BuiltinMethod::ALL {
            let mu = 0.37;
            let t = builtin(name, mu);
            let method = name.csrk_method(mu);
            let rule = QuadratureRule::gauss(method.family(), name.quad_points()).unwrap();
            for i in 0..t.stages() {
                let expected = rule.weights()[i] * method.b_at(rule.nodes()[i]);
                assert_abs_diff_eq!(t.b[i], expected, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn flat_format_round_trips_bitwise() {
        let t = builtin(BuiltinMethod::Hermite4SymS3, PI / 7.0);
        let text = t.to_flat_string();
        let back = ButcherTableau::from_flat_str(&text).unwrap();
        assert_eq!(t.stages(), back.stages());
        for i in 0..t.stages() {
            assert_eq!(t.c[i].to_bits(), back.c[i].to_bits());
            assert_eq!(t.b[i].to_bits(), back.b[i].to_bits());
            for j in 0..t.stages() {
                assert_eq!(t.a[i][j].to_bits(), back.a[i][j].to_bits());
            }
        }
    }

    #[test]
    fn block_format_shape() {
        let t = builtin(BuiltinMethod::Laguerre2S2, 0.0);
        let block = t.to_block_string();
        let lines: Vec<&str> = block.lines().collect();
        assert_eq!(lines.len(), 4); // 2 stage rows, rule, b row
        assert!(lines[0].contains('|'));
        assert!(lines[2].contains('+'));
        let c1: f64 = lines[0].split('|').next().unwrap().trim().parse().unwrap();
        assert!((c1 - t.c[0]).abs() < 1e-15);
    }

    #[test]
    fn flat_format_rejects_malformed_input() {
        assert!(ButcherTableau::from_flat_str("").is_err());
        assert!(ButcherTableau::from_flat_str("2\n1.0\n2.0\n").is_err());
        assert!(ButcherTableau::from_flat_str("x\n").is_err());
    }

    #[test]
    fn builtin_names_round_trip() {
        for name in BuiltinMethod::ALL {
            assert_eq!(name.name().parse::<BuiltinMethod>().unwrap(), name);
        }
        assert!(matches!(
            "nosuch".parse::<BuiltinMethod>(),
            Err(TableauError::UnknownName(_))
        ));
    }
}
