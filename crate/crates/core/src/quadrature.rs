//! Gauss–Christoffel quadrature rules for the polynomial families.
//!
//! Nodes are the zeros of the degree-`s` orthonormal polynomial, realized by
//! the Golub–Welsch construction: eigenvalues of the symmetric tridiagonal
//! Jacobi matrix give the nodes, squared first eigenvector components times
//! the 0-th moment give the weights. The resulting `s`-point rule integrates
//! `φ(x)·w(x)` exactly for every polynomial `φ` of degree `≤ 2s - 1`.

use thiserror::Error;

use crate::orthopoly::{OrthopolyError, PolynomialFamily};

/// Largest supported point count.
pub const MAX_POINTS: usize = 12;

/// QL sweep budget per eigenvalue.
const MAX_QL_SWEEPS: usize = 30;

/// Errors from rule generation and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    /// The tridiagonal eigensolver did not converge within its sweep budget
    /// (an implementation bug, not a user error).
    #[error("tridiagonal QL failed to converge for eigenvalue {index} within {sweeps} sweeps")]
    EigenFailure { index: usize, sweeps: usize },
    /// `integrate` was handed the wrong number of node values.
    #[error("expected {expected} node values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// Point count outside `1..=MAX_POINTS`.
    #[error("point count {s} outside the supported range 1..={max}")]
    PointCount { s: usize, max: usize },
    /// Propagated coefficient-degree error.
    #[error(transparent)]
    Orthopoly(#[from] OrthopolyError),
}

/// An `s`-point Gauss–Christoffel rule: ascending nodes, positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    family: PolynomialFamily,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `s`-point rule for `family`.
    ///
    /// Shifted families reuse the parent rule through the change of
    /// variables `u ↦ (u + 1)/2` (weights halved), which transfers exactness
    /// and makes the symmetry about 1/2 exact. Unshifted rules run the QL
    /// eigensolve, one Newton polish per node, and (for even weights) an
    /// explicit symmetrization of mirror pairs.
    ///
    /// ```
    /// use csrk::{FamilyKind, PolynomialFamily, QuadratureRule};
    ///
    /// // ∫_0^∞ x³ e^{-x} dx = 3!, caught exactly by two points.
    /// let family = PolynomialFamily::new(FamilyKind::Laguerre);
    /// let rule = QuadratureRule::gauss(&family, 2)?;
    /// assert!((rule.integrate_fn(|x| x.powi(3)) - 6.0).abs() < 1e-12);
    /// # Ok::<(), csrk::QuadratureError>(())
    /// ```
    pub fn gauss(family: &PolynomialFamily, s: usize) -> Result<Self, QuadratureError> {
        if !(1..=MAX_POINTS).contains(&s) {
            return Err(QuadratureError::PointCount { s, max: MAX_POINTS });
        }
        if let Some(parent_kind) = family.kind().parent() {
            let parent = PolynomialFamily::new(parent_kind);
            let rule = Self::gauss(&parent, s)?;
            return Ok(Self {
                family: family.clone(),
                nodes: rule.nodes.iter().map(|&u| (u + 1.0) / 2.0).collect(),
                weights: rule.weights.iter().map(|&w| w / 2.0).collect(),
            });
        }

        let mut diag: Vec<f64> = (0..s).map(|k| family.monic_recurrence(k).0).collect();
        let mut off: Vec<f64> = (0..s)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    family.monic_recurrence(k).1.sqrt()
                }
            })
            .collect();
        let mut first = vec![0.0; s];
        first[0] = 1.0;
        ql_implicit_shift(&mut diag, &mut off, &mut first)?;

        let moment0 = family.moment0();
        let mut pairs: Vec<(f64, f64)> = diag
            .iter()
            .zip(first.iter())
            .map(|(&x, &v)| (x, moment0 * v * v))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();

        // One Newton step on the orthonormal polynomial tightens the zero
        // residual left by the eigensolve.
        for x in nodes.iter_mut() {
            let (p, dp) = family.eval_with_derivative(s, *x);
            if dp != 0.0 {
                *x -= p / dp;
            }
        }

        if family.symmetry_axis() == Some(0.0) {
            symmetrize_about_zero(&mut nodes, &mut weights);
        }

        Ok(Self {
            family: family.clone(),
            nodes,
            weights,
        })
    }

    /// The family this rule integrates against.
    pub fn family(&self) -> &PolynomialFamily {
        &self.family
    }

    /// Number of points `s`.
    pub fn points(&self) -> usize {
        self.nodes.len()
    }

    /// Quadrature order `p = 2s`.
    pub fn order(&self) -> usize {
        2 * self.points()
    }

    /// Ascending nodes.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights (all positive).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted integral from integrand values at the nodes:
    /// `∫_I Φ(τ) w(τ) dτ ≈ Σ b_i Φ(c_i)`.
    pub fn integrate(&self, values: &[f64]) -> Result<f64, QuadratureError> {
        if values.len() != self.nodes.len() {
            return Err(QuadratureError::LengthMismatch {
                expected: self.nodes.len(),
                got: values.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(values.iter())
            .map(|(w, v)| w * v)
            .sum())
    }

    /// Weighted integral of a closure evaluated at the nodes.
    pub fn integrate_fn<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.weights
            .iter()
            .zip(self.nodes.iter())
            .map(|(w, &x)| w * f(x))
            .sum()
    }
}

/// Smallest rule of `family` that is exact for `polynomial × weight`
/// integrands of the given degree.
pub fn rule_for_degree(
    family: &PolynomialFamily,
    degree: usize,
) -> Result<QuadratureRule, QuadratureError> {
    let s = (degree + 2) / 2; // ceil((degree + 1)/2)
    QuadratureRule::gauss(family, s.max(1))
}

/// Max deviation of the Golub–Welsch weights from the closed form
/// `b_i = -μ_{s+1} / (μ_s · P'_s(c_i) · P_{s+1}(c_i))`, with the derivative
/// taken from the monomial coefficients.
pub fn weight_closed_form_residual(
    family: &PolynomialFamily,
    s: usize,
) -> Result<f64, QuadratureError> {
    // For shifted families the formula transports exactly under the affine
    // map that defines them (nodes (c+1)/2, weights b/2), so the closed form
    // is evaluated on the parent's monomial coefficients, which stay
    // well-conditioned at these degrees.
    if let Some(parent_kind) = family.kind().parent() {
        return weight_closed_form_residual(&PolynomialFamily::new(parent_kind), s)
            .map(|dev| dev / 2.0);
    }
    let rule = QuadratureRule::gauss(family, s)?;
    let ps = family.coeffs(s)?;
    let ps1 = family.coeffs(s + 1)?;
    let dps = ps.derivative();
    let mu_s = ps.leading_coefficient();
    let mu_s1 = ps1.leading_coefficient();
    let mut max_dev: f64 = 0.0;
    for (&c, &w) in rule.nodes().iter().zip(rule.weights().iter()) {
        let closed = -mu_s1 / (mu_s * dps.eval(c) * ps1.eval(c));
        max_dev = max_dev.max((w - closed).abs());
    }
    Ok(max_dev)
}

/// Averages mirror pairs so nodes are exactly antisymmetric and weights
/// exactly palindromic; the middle node of an odd rule is pinned to 0.
fn symmetrize_about_zero(nodes: &mut [f64], weights: &mut [f64]) {
    let s = nodes.len();
    for i in 0..s / 2 {
        let j = s - 1 - i;
        let x = (nodes[j] - nodes[i]) / 2.0;
        nodes[i] = -x;
        nodes[j] = x;
        let w = (weights[i] + weights[j]) / 2.0;
        weights[i] = w;
        weights[j] = w;
    }
    if s % 2 == 1 {
        nodes[s / 2] = 0.0;
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (Wilkinson shifts).
///
/// `diag` holds the diagonal, `off[1..]` the subdiagonal, `first` a row of
/// the accumulated orthogonal transform (seeded with `e_1` to obtain first
/// eigenvector components). On return `diag` holds the eigenvalues,
/// unordered. Derived from the classic Algol/EISPACK `tql2` procedure.
fn ql_implicit_shift(
    diag: &mut [f64],
    off: &mut [f64],
    first: &mut [f64],
) -> Result<(), QuadratureError> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        off[i - 1] = off[i];
    }
    off[n - 1] = 0.0;

    let eps = f64::EPSILON;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Look for a negligible subdiagonal element.
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= eps * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(QuadratureError::EigenFailure {
                    index: l,
                    sweeps: MAX_QL_SWEEPS,
                });
            }

            // Wilkinson shift from the leading 2x2 of the active block.
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            if g < 0.0 {
                r = -r;
            }
            g = diag[m] - diag[l] + off[l] / (g + r);

            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    // Deflate and retry the sweep.
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;

                f = first[i + 1];
                first[i + 1] = s * first[i] + c * f;
                first[i] = c * first[i] - s * f;
            }
            if underflowed {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
