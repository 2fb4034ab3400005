//! Coefficient functions of continuous-stage Runge-Kutta methods.
//!
//! A method is the triple `(A_{τ,σ} w(σ), B_τ w(τ), C_τ)` with `C_τ ≡ τ`.
//! `B_τ` is expanded in the family's orthonormal basis with the leading
//! coefficients fixed by the order conditions `B̆(ξ)`; `A_{τ,σ}` uses the
//! skew-symmetric ansatz
//!
//! ```text
//! A_{τ,σ} = B_σ (1/2 + Σ α_{(i,j)} P_i(τ) P_j(σ)),   α_{(i,j)} = -α_{(j,i)},
//! ```
//!
//! which makes the symplectic condition
//! `B_τ A_{τ,σ} + B_σ A_{σ,τ} ≡ B_τ B_σ` hold structurally. The remaining
//! order conditions `C̆(η)` become a small linear system in the `α` entries;
//! underdetermined directions surface as named free parameters.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::orthopoly::{FamilyKind, OrthopolyError, Polynomial, PolynomialFamily};
use crate::quadrature::{rule_for_degree, QuadratureError, QuadratureRule};

/// Pivot threshold of the coefficient-matching eliminator.
const PIVOT_TOL: f64 = 1e-9;

/// Residual above which an unmatchable equation is reported as inconsistent.
const CONSISTENCY_TOL: f64 = 1e-9;

/// Errors from the coefficient-function constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CstageError {
    /// `build_b` extras must sit at indices `≥ ξ`.
    #[error("extras index {j} below the B̆ order xi = {xi}")]
    InvalidExtras { j: usize, xi: usize },
    /// The matching equations admit no solution for these orders.
    #[error("matching equations inconsistent (residual {residual:.3e})")]
    Inconsistent { residual: f64 },
    /// Reflection symmetry was requested for a family without
    /// `P_n(1-x) = (-1)^n P_n(x)`.
    #[error("family {family:?} has no reflection symmetry about 1/2")]
    SymmetryUnsupported { family: FamilyKind },
    /// A free parameter was left without a value.
    #[error("missing value for free parameter {name}")]
    MissingParameter { name: String },
    /// Propagated polynomial-degree error.
    #[error(transparent)]
    Orthopoly(#[from] OrthopolyError),
    /// Propagated quadrature error.
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// The simplifying-assumption orders `(ξ, η, ζ)` plus the τ-degree cap `ρ`
/// of the `A` ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplifyingOrders {
    /// `B̆(ξ)` order, `ξ ≥ 1`.
    pub xi: usize,
    /// `C̆(η)` order.
    pub eta: usize,
    /// `D̆(ζ)` order.
    pub zeta: usize,
    /// τ-degree cap of the `A` ansatz.
    pub rho: usize,
}

impl SimplifyingOrders {
    /// Orders with `ζ = min(ξ, η)`, the value a symplectic method satisfying
    /// `B̆(ξ)` and `C̆(η)` automatically attains.
    pub fn new(xi: usize, eta: usize, rho: usize) -> Self {
        assert!(xi >= 1, "consistency requires xi >= 1");
        Self {
            xi,
            eta,
            zeta: xi.min(eta),
            rho,
        }
    }

    /// Orders with an explicit `ζ`.
    pub fn with_zeta(xi: usize, eta: usize, zeta: usize, rho: usize) -> Self {
        assert!(xi >= 1, "consistency requires xi >= 1");
        Self { xi, eta, zeta, rho }
    }

    /// Effective skew-matrix size bound `r = min(ρ, ξ - η)`.
    pub fn alpha_rank(&self) -> usize {
        self.rho.min(self.xi.saturating_sub(self.eta))
    }

    /// Order lower bound `min(ξ, 2η + 2, η + ζ + 1)` of the
    /// continuous-stage method.
    pub fn predicted_cs_order(&self) -> usize {
        self.xi.min(2 * self.eta + 2).min(self.eta + self.zeta + 1)
    }
}

/// Canonical name of the `α_{(i,j)}` entry, used for free parameters.
pub fn param_name(i: usize, j: usize) -> String {
    format!("alpha({i},{j})")
}

/// An affine expression `c0 + Σ c_k · param_k` over the free parameters of
/// an [`AlphaSolution`].
#[derive(Debug, Clone, PartialEq)]
pub struct AffineExpr {
    constant: f64,
    /// Coefficients per free parameter, indexed like
    /// [`AlphaSolution::free_params`].
    coefficients: Vec<f64>,
}

impl AffineExpr {
    fn zero(n_params: usize) -> Self {
        Self {
            constant: 0.0,
            coefficients: vec![0.0; n_params],
        }
    }

    fn unit_param(index: usize, n_params: usize) -> Self {
        let mut e = Self::zero(n_params);
        e.coefficients[index] = 1.0;
        e
    }

    /// Constant part.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Coefficient of the `k`-th free parameter.
    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients.get(k).copied().unwrap_or(0.0)
    }

    /// Value once every free parameter is fixed.
    pub fn eval(&self, params: &[f64]) -> f64 {
        self.constant
            + self
                .coefficients
                .iter()
                .zip(params.iter())
                .map(|(c, p)| c * p)
                .sum::<f64>()
    }

    fn add_scaled(&mut self, other: &AffineExpr, factor: f64) {
        self.constant += factor * other.constant;
        for (c, o) in self.coefficients.iter_mut().zip(other.coefficients.iter()) {
            *c += factor * o;
        }
    }

    fn scale(&mut self, factor: f64) {
        self.constant *= factor;
        for c in self.coefficients.iter_mut() {
            *c *= factor;
        }
    }

    fn negate(&self) -> AffineExpr {
        let mut e = self.clone();
        e.scale(-1.0);
        e
    }
}

/// Affine parametrization of the skew-symmetric `α` entries solving the
/// `C̆(η)` matching equations.
#[derive(Debug, Clone)]
pub struct AlphaSolution {
    family: PolynomialFamily,
    orders: SimplifyingOrders,
    symmetric: bool,
    /// Upper-triangle entries `(i, j)`, `i < j ≤ r`, as affine expressions.
    entries: BTreeMap<(usize, usize), AffineExpr>,
    /// Index pairs of the surviving free parameters, lexicographic.
    free: Vec<(usize, usize)>,
}

impl AlphaSolution {
    /// The family the solution was built for.
    pub fn family(&self) -> &PolynomialFamily {
        &self.family
    }

    /// The orders the solution satisfies.
    pub fn orders(&self) -> SimplifyingOrders {
        self.orders
    }

    /// Whether the reflection-symmetric restriction (only odd `i + j`) was
    /// applied.
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// Raw parameter count of the ansatz before solving, `r(r+1)/2`.
    pub fn raw_dof(&self) -> usize {
        let r = self.orders.alpha_rank();
        r * (r + 1) / 2
    }

    /// Index pairs of the free parameters, lexicographic.
    pub fn free_indices(&self) -> &[(usize, usize)] {
        &self.free
    }

    /// Names of the free parameters, lexicographic.
    pub fn free_params(&self) -> Vec<String> {
        self.free.iter().map(|&(i, j)| param_name(i, j)).collect()
    }

    /// The affine expression of `α_{(i,j)}` (skew-extended: `(j,i)` returns
    /// the negation, the diagonal returns zero).
    pub fn entry(&self, i: usize, j: usize) -> AffineExpr {
        if i == j {
            return AffineExpr::zero(self.free.len());
        }
        let (key, flip) = if i < j {
            ((i, j), false)
        } else {
            ((j, i), true)
        };
        let expr = self
            .entries
            .get(&key)
            .cloned()
            .unwrap_or_else(|| AffineExpr::zero(self.free.len()));
        if flip {
            expr.negate()
        } else {
            expr
        }
    }

    /// Substitutes values (keyed by [`param_name`]) and returns the concrete
    /// skew-symmetric matrix of size `(r+1) × (r+1)`.
    pub fn instantiate(
        &self,
        values: &BTreeMap<String, f64>,
    ) -> Result<Vec<Vec<f64>>, CstageError> {
        let params: Vec<f64> = self
            .free
            .iter()
            .map(|&(i, j)| {
                let name = param_name(i, j);
                values
                    .get(&name)
                    .copied()
                    .ok_or(CstageError::MissingParameter { name })
            })
            .collect::<Result<_, _>>()?;
        let dim = self.orders.alpha_rank() + 1;
        let mut matrix = vec![vec![0.0; dim]; dim];
        for (&(i, j), expr) in &self.entries {
            let v = expr.eval(&params);
            matrix[i][j] = v;
            matrix[j][i] = -v;
        }
        Ok(matrix)
    }
}

/// Builds the `B_τ` expansion coefficients: `b_j = ∫_0^1 P_j(x) dx` for
/// `j < ξ` (so `B̆(ξ)` holds by construction), plus optional extra terms
/// `λ_j` at indices `j ≥ ξ`.
pub fn build_b(
    family: &PolynomialFamily,
    xi: usize,
    extras: &BTreeMap<usize, f64>,
) -> Result<Vec<f64>, CstageError> {
    assert!(xi >= 1, "consistency requires xi >= 1");
    if let Some((&j, _)) = extras.iter().find(|(&j, _)| j < xi) {
        return Err(CstageError::InvalidExtras { j, xi });
    }
    let len = extras.keys().next_back().map_or(xi, |&j| (j + 1).max(xi));
    let mut b = vec![0.0; len];
    for (j, slot) in b.iter_mut().take(xi).enumerate() {
        *slot = family.integral_01(j)?;
    }
    for (&j, &lambda) in extras {
        b[j] = lambda;
    }
    Ok(b)
}

/// Solves the `C̆(η)` matching equations for the skew-symmetric `α` ansatz
/// under the `B̆(ξ)` form of `B_τ` (no extras).
///
/// With test functions `φ_k = x^k` the equations read, coefficient by
/// coefficient in the orthonormal basis,
///
/// ```text
/// Σ α_{(i,j)} P_i(τ) ∫_0^1 P_j(x) x^k dx  =  ∫_0^τ x^k dx - 1/2 ∫_0^1 x^k dx,
/// ```
///
/// for `k = 0, …, η-1`. Underdetermined directions become free parameters,
/// named lexicographically by `(i, j)`. With `symmetric` set, entries with
/// even `i + j` are pinned to zero, which is admissible only for families
/// with the `P_n(1-x) = (-1)^n P_n(x)` reflection property.
pub fn solve_symplectic_alpha(
    family: &PolynomialFamily,
    orders: SimplifyingOrders,
    symmetric: bool,
) -> Result<AlphaSolution, CstageError> {
    if symmetric && !family.reflects_about_half() {
        return Err(CstageError::SymmetryUnsupported {
            family: family.kind(),
        });
    }
    let r = orders.alpha_rank();

    // Unknowns: upper-triangle entries, lexicographic; the symmetric
    // restriction keeps only odd i+j.
    let unknowns: Vec<(usize, usize)> = (0..=r)
        .flat_map(|i| (i + 1..=r).map(move |j| (i, j)))
        .filter(|&(i, j)| !symmetric || (i + j) % 2 == 1)
        .collect();

    // g[j][k] = ∫_0^1 P_j(x) x^k dx, exact from the antiderivative.
    let mut g = vec![vec![0.0; orders.eta]; r + 1];
    for (j, row) in g.iter_mut().enumerate() {
        let pj = family.coeffs(j)?;
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = pj.mul_x_pow(k).integral(0.0, 1.0);
        }
    }

    let max_index = r.max(orders.eta);
    // Equation rows in elimination order: basis index descending, k ascending.
    // Within a row the structural pivot is the unknown sharing the row's
    // basis index with the largest partner index; this ordering is what makes
    // the lexicographically-early entries come out as the free parameters.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut row_basis_index: Vec<usize> = Vec::new();
    for i in (0..=max_index).rev() {
        for k in 0..orders.eta {
            // RHS polynomial τ^{k+1}/(k+1) - 1/(2(k+1)) expanded in the basis.
            let kf = (k + 1) as f64;
            let mut coeffs = vec![0.0; k + 2];
            coeffs[0] = -0.5 / kf;
            coeffs[k + 1] = 1.0 / kf;
            let expansion = family.expand_in_basis(&Polynomial::new(coeffs))?;
            let target = expansion.get(i).copied().unwrap_or(0.0);

            let mut row = vec![0.0; unknowns.len()];
            for (col, &(a, b)) in unknowns.iter().enumerate() {
                if a == i {
                    row[col] += g[b][k];
                }
                if b == i {
                    row[col] -= g[a][k];
                }
            }
            rows.push(row);
            rhs.push(target);
            row_basis_index.push(i);
        }
    }

    // Forward elimination with the structural pivot preference.
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut pivoted = vec![false; unknowns.len()];
    for row_idx in 0..rows.len() {
        for &(pr, pc) in &pivots {
            let factor = rows[row_idx][pc] / rows[pr][pc];
            if factor != 0.0 {
                let pivot_row = rows[pr].clone();
                for (c, v) in rows[row_idx].iter_mut().enumerate() {
                    *v -= factor * pivot_row[c];
                }
                rhs[row_idx] -= factor * rhs[pr];
            }
            // Zero the eliminated column exactly: back-substitution then
            // only ever references free or later-pivoted columns.
            rows[row_idx][pc] = 0.0;
        }
        let i = row_basis_index[row_idx];
        let structural = unknowns
            .iter()
            .enumerate()
            .filter(|&(col, &(a, b))| {
                !pivoted[col] && (a == i || b == i) && rows[row_idx][col].abs() >= PIVOT_TOL
            })
            .max_by_key(|&(_, &(a, b))| if a == i { b } else { a })
            .map(|(col, _)| col);
        let fallback = || {
            (0..unknowns.len())
                .filter(|&col| !pivoted[col] && rows[row_idx][col].abs() >= PIVOT_TOL)
                .max_by(|&x, &y| {
                    rows[row_idx][x]
                        .abs()
                        .partial_cmp(&rows[row_idx][y].abs())
                        .unwrap()
                })
        };
        match structural.or_else(fallback) {
            Some(col) => {
                pivoted[col] = true;
                pivots.push((row_idx, col));
            }
            None => {
                let residual = rhs[row_idx].abs();
                if residual > CONSISTENCY_TOL {
                    return Err(CstageError::Inconsistent { residual });
                }
            }
        }
    }

    let free: Vec<(usize, usize)> = unknowns
        .iter()
        .enumerate()
        .filter(|&(col, _)| !pivoted[col])
        .map(|(_, &ij)| ij)
        .collect();
    let n_free = free.len();
    let col_to_free: BTreeMap<usize, usize> = unknowns
        .iter()
        .enumerate()
        .filter(|&(col, _)| !pivoted[col])
        .enumerate()
        .map(|(free_idx, (col, _))| (col, free_idx))
        .collect();

    // Back-substitution: pivot rows in reverse order only ever reference
    // free columns or pivots resolved later in the forward pass.
    let mut exprs: BTreeMap<usize, AffineExpr> = col_to_free
        .iter()
        .map(|(&col, &free_idx)| (col, AffineExpr::unit_param(free_idx, n_free)))
        .collect();
    for &(pr, pc) in pivots.iter().rev() {
        let mut expr = AffineExpr::zero(n_free);
        expr.constant = rhs[pr];
        for (c, &coeff) in rows[pr].iter().enumerate() {
            if c == pc || coeff == 0.0 {
                continue;
            }
            let other = exprs
                .get(&c)
                .expect("eliminated rows reference only resolved columns");
            expr.add_scaled(&other.clone(), -coeff);
        }
        expr.scale(1.0 / rows[pr][pc]);
        exprs.insert(pc, expr);
    }

    let mut entries: BTreeMap<(usize, usize), AffineExpr> = BTreeMap::new();
    for (col, &(i, j)) in unknowns.iter().enumerate() {
        entries.insert((i, j), exprs.remove(&col).unwrap());
    }
    if symmetric {
        // Even-sum entries are structurally zero under the reflection form.
        for i in 0..=r {
            for j in i + 1..=r {
                entries
                    .entry((i, j))
                    .or_insert_with(|| AffineExpr::zero(n_free));
            }
        }
    }

    Ok(AlphaSolution {
        family: family.clone(),
        orders,
        symmetric,
        entries,
        free,
    })
}

/// Substitutes parameter values into an [`AlphaSolution`] and packs the
/// concrete method. `A_{τ,σ} = B_σ (1/2 + Σ α_{(i,j)} P_i(τ) P_j(σ))`.
pub fn assemble_method(
    family: &PolynomialFamily,
    b: Vec<f64>,
    solution: &AlphaSolution,
    values: &BTreeMap<String, f64>,
) -> Result<CsrkMethod, CstageError> {
    let alpha = solution.instantiate(values)?;
    Ok(CsrkMethod {
        family: family.clone(),
        b,
        alpha,
        orders: solution.orders(),
    })
}

/// A concrete continuous-stage Runge-Kutta method: `B` expansion
/// coefficients, skew-symmetric `α` matrix and the orders it was built for
/// (`C_τ ≡ τ` throughout).
#[derive(Debug, Clone, PartialEq)]
pub struct CsrkMethod {
    family: PolynomialFamily,
    b: Vec<f64>,
    alpha: Vec<Vec<f64>>,
    orders: SimplifyingOrders,
}

impl CsrkMethod {
    /// Low-level constructor from raw parts. No skew-symmetry check is
    /// performed, so deliberately broken matrices can be fed to the
    /// structural checks.
    pub fn from_parts(
        family: PolynomialFamily,
        b: Vec<f64>,
        alpha: Vec<Vec<f64>>,
        orders: SimplifyingOrders,
    ) -> Self {
        assert!(
            alpha.iter().all(|row| row.len() == alpha.len()),
            "alpha must be square"
        );
        Self {
            family,
            b,
            alpha,
            orders,
        }
    }

    /// The family of the method.
    pub fn family(&self) -> &PolynomialFamily {
        &self.family
    }

    /// `B_τ` expansion coefficients in the orthonormal basis.
    pub fn b_coefficients(&self) -> &[f64] {
        &self.b
    }

    /// The concrete `α` matrix.
    pub fn alpha(&self) -> &[Vec<f64>] {
        &self.alpha
    }

    /// The simplifying-assumption orders the method was built for.
    pub fn orders(&self) -> SimplifyingOrders {
        self.orders
    }

    /// `B_τ = Σ b_j P_j(τ)`.
    pub fn b_at(&self, tau: f64) -> f64 {
        if self.b.is_empty() {
            return 0.0;
        }
        let values = self.family.eval_upto(self.b.len() - 1, tau);
        self.b.iter().zip(values.iter()).map(|(b, p)| b * p).sum()
    }

    /// `A_{τ,σ} = B_σ (1/2 + Σ_{i,j} α_{i,j} P_i(τ) P_j(σ))`.
    pub fn a_at(&self, tau: f64, sigma: f64) -> f64 {
        self.b_at(sigma) * (0.5 + self.alpha_form(tau, sigma))
    }

    /// The bilinear part `Σ α_{i,j} P_i(τ) P_j(σ)` of the ansatz.
    fn alpha_form(&self, tau: f64, sigma: f64) -> f64 {
        self.alpha_form_with_magnitude(tau, sigma).0
    }

    /// The bilinear part together with the sum of the absolute summands,
    /// which sets the rounding floor of the cancellations the structural
    /// checks look at.
    fn alpha_form_with_magnitude(&self, tau: f64, sigma: f64) -> (f64, f64) {
        let dim = self.alpha.len();
        if dim == 0 {
            return (0.0, 0.0);
        }
        let pt = self.family.eval_upto(dim - 1, tau);
        let ps = self.family.eval_upto(dim - 1, sigma);
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for (i, row) in self.alpha.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a != 0.0 {
                    let term = a * pt[i] * ps[j];
                    sum += term;
                    magnitude += term.abs();
                }
            }
        }
        (sum, magnitude)
    }

    /// Per-node expansion of `A_{τ,σ₀}` in the τ basis: coefficient of
    /// `P_i(τ)` for `i = 0, …, a_tau_degree()`.
    pub fn a_tau_coefficients(&self, sigma: f64) -> Vec<f64> {
        let dim = self.alpha.len().max(1);
        let ps = self.family.eval_upto(dim - 1, sigma);
        let p0 = self.family.eval(0, 0.0);
        let b_sigma = self.b_at(sigma);
        let degree = self.a_tau_degree();
        let mut out = vec![0.0; degree + 1];
        out[0] = b_sigma / (2.0 * p0);
        for (i, slot) in out.iter_mut().enumerate() {
            if i < self.alpha.len() {
                let dot: f64 = self.alpha[i]
                    .iter()
                    .zip(ps.iter())
                    .map(|(a, p)| a * p)
                    .sum();
                *slot += b_sigma * dot;
            }
        }
        out
    }

    /// Polynomial degree of `B_τ`.
    pub fn b_degree(&self) -> usize {
        self.b.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// τ-degree of `A_{τ,σ}` (largest `i` with a nonzero `α` row).
    pub fn a_tau_degree(&self) -> usize {
        (0..self.alpha.len())
            .rev()
            .find(|&i| self.alpha[i].iter().any(|&a| a != 0.0))
            .unwrap_or(0)
    }

    /// σ-degree of `A_{τ,σ}` (degree of `B` plus the largest `j` with a
    /// nonzero `α` column).
    pub fn a_sigma_degree(&self) -> usize {
        let max_j = (0..self.alpha.len())
            .rev()
            .find(|&j| self.alpha.iter().any(|row| row[j] != 0.0))
            .unwrap_or(0);
        self.b_degree() + max_j
    }

    fn sample_nodes(&self) -> Result<Vec<f64>, CstageError> {
        Ok(QuadratureRule::gauss(&self.family, 10)?.nodes().to_vec())
    }

    /// Max residual of `B̆(ξ)`: `∫_I B_τ w(τ) τ^{k-1} dτ = 1/k` for
    /// `k = 1, …, ξ`.
    pub fn check_b(&self, xi: usize) -> Result<f64, CstageError> {
        let mut worst: f64 = 0.0;
        for k in 1..=xi {
            let rule = rule_for_degree(&self.family, self.b_degree() + k - 1)?;
            let integral = rule.integrate_fn(|x| self.b_at(x) * x.powi((k - 1) as i32));
            worst = worst.max((integral - 1.0 / k as f64).abs());
        }
        Ok(worst)
    }

    /// Max residual of `C̆(η)`:
    /// `∫_I A_{τ,σ} w(σ) σ^k dσ = τ^{k+1}/(k+1)` for `k = 0, …, η-1`,
    /// sampled at the 10-point-rule nodes in τ.
    pub fn check_c(&self, eta: usize) -> Result<f64, CstageError> {
        let samples = self.sample_nodes()?;
        let mut worst: f64 = 0.0;
        for k in 0..eta {
            let rule = rule_for_degree(&self.family, self.a_sigma_degree() + k)?;
            for &tau in &samples {
                let integral =
                    rule.integrate_fn(|sigma| self.a_at(tau, sigma) * sigma.powi(k as i32));
                let target = tau.powi((k + 1) as i32) / (k + 1) as f64;
                worst = worst.max((integral - target).abs());
            }
        }
        Ok(worst)
    }

    /// Max residual of `D̆(ζ)`:
    /// `∫_I B_τ A_{τ,σ} w(τ) τ^k dτ = B_σ (1 - σ^{k+1})/(k+1)` for
    /// `k = 0, …, ζ-1`, sampled at the 10-point-rule nodes in σ.
    pub fn check_d(&self, zeta: usize) -> Result<f64, CstageError> {
        let samples = self.sample_nodes()?;
        let mut worst: f64 = 0.0;
        for k in 0..zeta {
            let degree = self.b_degree() + self.a_tau_degree() + k;
            let rule = rule_for_degree(&self.family, degree)?;
            for &sigma in &samples {
                let integral = rule.integrate_fn(|tau| {
                    self.b_at(tau) * self.a_at(tau, sigma) * tau.powi(k as i32)
                });
                let target = self.b_at(sigma) * (1.0 - sigma.powi((k + 1) as i32)) / (k + 1) as f64;
                worst = worst.max((integral - target).abs());
            }
        }
        Ok(worst)
    }

    /// Max scaled residual of the symplectic condition
    /// `B_τ A_{τ,σ} + B_σ A_{σ,τ} - B_τ B_σ` over a 10×10 grid of the
    /// family's quadrature nodes.
    ///
    /// The residual is scaled by the magnitude of the intermediate products:
    /// at the far nodes of the unbounded families those reach 10^4 and
    /// beyond, so the absolute rounding floor of an identically-zero
    /// expression would exceed any fixed threshold.
    pub fn check_symplectic(&self) -> Result<f64, CstageError> {
        let nodes = self.sample_nodes()?;
        let mut worst: f64 = 0.0;
        for &tau in &nodes {
            for &sigma in &nodes {
                let bt = self.b_at(tau);
                let bs = self.b_at(sigma);
                let (s1, m1) = self.alpha_form_with_magnitude(tau, sigma);
                let (s2, m2) = self.alpha_form_with_magnitude(sigma, tau);
                let lhs1 = bt * bs * (0.5 + s1);
                let lhs2 = bs * bt * (0.5 + s2);
                let rhs = bt * bs;
                let scale = 1.0 + (bt * bs).abs() * (1.0 + m1 + m2);
                worst = worst.max((lhs1 + lhs2 - rhs).abs() / scale);
            }
        }
        Ok(worst)
    }

    /// Max scaled residual of the symmetry conditions
    /// `A_{τ,σ} + A_{1-τ,1-σ} - B_σ` and `B_σ - B_{1-σ}` over a 10×10 grid,
    /// for families whose weight reflects about 1/2.
    pub fn check_symmetric(&self) -> Result<f64, CstageError> {
        if !self.family.reflects_about_half() {
            return Err(CstageError::SymmetryUnsupported {
                family: self.family.kind(),
            });
        }
        let nodes = self.sample_nodes()?;
        let mut worst: f64 = 0.0;
        for &sigma in &nodes {
            let b = self.b_at(sigma);
            let b_reflected = self.b_at(1.0 - sigma);
            let scale = 1f64.max(b.abs()).max(b_reflected.abs());
            worst = worst.max((b - b_reflected).abs() / scale);
            for &tau in &nodes {
                let (s1, m1) = self.alpha_form_with_magnitude(tau, sigma);
                let (s2, m2) = self.alpha_form_with_magnitude(1.0 - tau, 1.0 - sigma);
                let lhs1 = b * (0.5 + s1);
                let lhs2 = b_reflected * (0.5 + s2);
                let scale = 1.0 + b.abs().max(b_reflected.abs()) * (1.0 + m1 + m2);
                worst = worst.max((lhs1 + lhs2 - b).abs() / scale);
            }
        }
        Ok(worst)
    }

    /// Residual of the consistency relation `∫_I A_{τ,σ} w(σ) dσ = τ`
    /// at the 10-point-rule τ samples (the `k = 0` matching equation).
    pub fn check_consistency(&self) -> Result<f64, CstageError> {
        let samples = self.sample_nodes()?;
        let rule = rule_for_degree(&self.family, self.a_sigma_degree())?;
        let mut worst: f64 = 0.0;
        for &tau in &samples {
            let integral = rule.integrate_fn(|sigma| self.a_at(tau, sigma));
            worst = worst.max((integral - tau).abs());
        }
        Ok(worst)
    }
}
