//! Orthonormal polynomial families and their weight functions.
//!
//! Five families are supported: Legendre on `[-1, 1]`, shifted Legendre on
//! `[0, 1]`, Laguerre on `[0, ∞)`, Hermite on `(-∞, ∞)` and shifted Hermite
//! on `(-∞, ∞)` with weight `exp(-(2x-1)²)`. Every family is normalized so
//! that the weighted inner product satisfies `(P_i, P_j)_w = δ_ij`.
//!
//! Evaluation goes through the three-term recurrence (numerically stable);
//! monomial coefficients are exposed separately for antiderivatives and
//! leading coefficients. Shifted families are obtained from their parents by
//! the affine map `x ↦ 2x - 1` together with a `√2` rescaling that restores
//! unit norm.

use thiserror::Error;

/// Largest degree for which monomial coefficients are handed out.
///
/// The constructions in this crate never need more than degree 6; the cap
/// keeps the monomial basis well-conditioned in double precision.
pub const MAX_COEFF_DEGREE: usize = 12;

/// Errors from the polynomial-family operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrthopolyError {
    /// Monomial coefficients were requested beyond [`MAX_COEFF_DEGREE`].
    #[error("degree {n} exceeds the monomial-coefficient cap {max}")]
    DegreeTooLarge { n: usize, max: usize },
    /// A weight evaluation outside the family's interval (a caller bug).
    #[error("x = {x} lies outside the family interval [{lo}, {hi}]")]
    OutOfInterval { x: f64, lo: f64, hi: f64 },
}

/// Dense polynomial in the monomial basis; `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from monomial coefficients (index = power).
    pub fn new(coeffs: Vec<f64>) -> Self {
        if coeffs.is_empty() {
            Self { coeffs: vec![0.0] }
        } else {
            Self { coeffs }
        }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// Monomial coefficients, lowest power first.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Degree implied by the trailing nonzero coefficient (0 for the zero
    /// polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Leading coefficient (of the term at [`Self::degree`]).
    pub fn leading_coefficient(&self) -> f64 {
        self.coeffs[self.degree()]
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Derivative polynomial.
    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| (k + 1) as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Polynomial {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(0.0);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Polynomial::new(out)
    }

    /// Definite integral over `[a, b]` via the exact antiderivative.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    /// Scales every coefficient by `s`.
    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// Multiplies by `x^k`.
    pub fn mul_x_pow(&self, k: usize) -> Polynomial {
        let mut out = vec![0.0; k];
        out.extend_from_slice(&self.coeffs);
        Polynomial::new(out)
    }

    /// Composition `p(a·x + b)`, by Horner in polynomial arithmetic.
    pub fn compose_affine(&self, a: f64, b: f64) -> Polynomial {
        let lin = Polynomial::new(vec![b, a]);
        let mut acc = Polynomial::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Polynomial::constant(c));
        }
        acc
    }
}

/// The supported weight-function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `w(x) = 1` on `[-1, 1]`.
    Legendre,
    /// `w(x) = 1` on `[0, 1]` (Legendre transported by `x ↦ 2x - 1`).
    ShiftedLegendre,
    /// `w(x) = e^{-x}` on `[0, ∞)`.
    Laguerre,
    /// `w(x) = e^{-x²}` on `(-∞, ∞)`.
    Hermite,
    /// `w(x) = e^{-(2x-1)²}` on `(-∞, ∞)` (Hermite transported by `x ↦ 2x - 1`).
    ShiftedHermite,
}

impl FamilyKind {
    /// All five kinds, handy for sweeps in tests.
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Legendre,
        FamilyKind::ShiftedLegendre,
        FamilyKind::Laguerre,
        FamilyKind::Hermite,
        FamilyKind::ShiftedHermite,
    ];

    /// Parent family for the shifted kinds.
    pub fn parent(self) -> Option<FamilyKind> {
        match self {
            FamilyKind::ShiftedLegendre => Some(FamilyKind::Legendre),
            FamilyKind::ShiftedHermite => Some(FamilyKind::Hermite),
            _ => None,
        }
    }

    /// Stable lowercase name (CLI and serialization surface).
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Legendre => "legendre",
            FamilyKind::ShiftedLegendre => "shifted-legendre",
            FamilyKind::Laguerre => "laguerre",
            FamilyKind::Hermite => "hermite",
            FamilyKind::ShiftedHermite => "shifted-hermite",
        }
    }
}

/// Monic three-term recurrence coefficients `(α_k, β_k)` of the parent
/// (unshifted) family; `β_0` carries the 0-th moment of the weight.
fn parent_recurrence(kind: FamilyKind, k: usize) -> (f64, f64) {
    match kind {
        FamilyKind::Legendre => {
            let beta = if k == 0 {
                2.0
            } else {
                let kf = k as f64;
                kf * kf / (4.0 * kf * kf - 1.0)
            };
            (0.0, beta)
        }
        FamilyKind::Laguerre => {
            let kf = k as f64;
            let beta = if k == 0 { 1.0 } else { kf * kf };
            (2.0 * kf + 1.0, beta)
        }
        FamilyKind::Hermite => {
            let beta = if k == 0 {
                std::f64::consts::PI.sqrt()
            } else {
                k as f64 / 2.0
            };
            (0.0, beta)
        }
        FamilyKind::ShiftedLegendre | FamilyKind::ShiftedHermite => {
            unreachable!("shifted kinds map their parent recurrence")
        }
    }
}

/// Length of the precomputed recurrence tables; covers every construction in
/// the crate (12-point rules and degree-12 coefficients) with slack.
const RECURRENCE_TABLE_LEN: usize = 16;

/// An orthonormal polynomial family together with its weight function.
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFamily {
    kind: FamilyKind,
    interval: (f64, f64),
    /// Monic three-term recurrence pairs `(α_k, β_k)` of this family
    /// (already affine-mapped for the shifted kinds); `β_0` is the 0-th
    /// moment of the weight.
    recurrence: Vec<(f64, f64)>,
    /// Scale factors taking the monic polynomial of each degree to the
    /// orthonormal one (signed: Laguerre carries the Rodrigues `(-1)^n`).
    normalization: Vec<f64>,
    symmetry_axis: Option<f64>,
}

impl PolynomialFamily {
    /// Builds the family for `kind` with its recurrence tables populated.
    pub fn new(kind: FamilyKind) -> Self {
        let interval = match kind {
            FamilyKind::Legendre => (-1.0, 1.0),
            FamilyKind::ShiftedLegendre => (0.0, 1.0),
            FamilyKind::Laguerre => (0.0, f64::INFINITY),
            FamilyKind::Hermite | FamilyKind::ShiftedHermite => (f64::NEG_INFINITY, f64::INFINITY),
        };
        let symmetry_axis = match kind {
            FamilyKind::Legendre | FamilyKind::Hermite => Some(0.0),
            FamilyKind::ShiftedLegendre | FamilyKind::ShiftedHermite => Some(0.5),
            FamilyKind::Laguerre => None,
        };
        let recurrence: Vec<(f64, f64)> = (0..RECURRENCE_TABLE_LEN)
            .map(|k| Self::recurrence_for(kind, k))
            .collect();
        let mut normalization = Vec::with_capacity(RECURRENCE_TABLE_LEN);
        let mut norm_sq = 1.0;
        for (n, &(_, beta)) in recurrence.iter().enumerate() {
            norm_sq *= beta;
            normalization.push(Self::sign(kind, n) / norm_sq.sqrt());
        }
        Self {
            kind,
            interval,
            recurrence,
            normalization,
            symmetry_axis,
        }
    }

    fn recurrence_for(kind: FamilyKind, k: usize) -> (f64, f64) {
        match kind.parent() {
            // Affine map x ↦ 2x - 1: α̂ = (α + 1)/2, β̂_0 = β_0/2, β̂_k = β_k/4.
            Some(parent) => {
                let (alpha, beta) = parent_recurrence(parent, k);
                let beta = if k == 0 { beta / 2.0 } else { beta / 4.0 };
                ((alpha + 1.0) / 2.0, beta)
            }
            None => parent_recurrence(kind, k),
        }
    }

    /// Rodrigues sign of degree `n`: the classical Laguerre normalization
    /// carries leading coefficient `(-1)^n/n!`, every other family is
    /// positive-leading.
    fn sign(kind: FamilyKind, n: usize) -> f64 {
        match kind {
            FamilyKind::Laguerre if n % 2 == 1 => -1.0,
            _ => 1.0,
        }
    }

    /// Family kind.
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Orthogonality interval `(a, b)`, with `±∞` for infinite ends.
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// Reflection axis of the weight, when one exists (0 for even weights,
    /// 1/2 for the shifted families).
    pub fn symmetry_axis(&self) -> Option<f64> {
        self.symmetry_axis
    }

    /// Whether the family satisfies `P_n(1-x) = (-1)^n P_n(x)` (the shifted
    /// kinds; their weight satisfies `w(1-x) = w(x)`).
    pub fn reflects_about_half(&self) -> bool {
        self.symmetry_axis == Some(0.5)
    }

    /// 0-th moment of the weight, `∫_I w(x) dx`.
    pub fn moment0(&self) -> f64 {
        self.recurrence[0].1
    }

    /// Monic recurrence pair `(α_k, β_k)` of this family.
    pub fn monic_recurrence(&self, k: usize) -> (f64, f64) {
        if k < self.recurrence.len() {
            self.recurrence[k]
        } else {
            Self::recurrence_for(self.kind, k)
        }
    }

    fn normalization_factor(&self, n: usize) -> f64 {
        if n < self.normalization.len() {
            self.normalization[n]
        } else {
            let mut norm_sq = 1.0;
            for k in 0..=n {
                norm_sq *= self.monic_recurrence(k).1;
            }
            Self::sign(self.kind, n) / norm_sq.sqrt()
        }
    }

    /// Weight function value at `x`.
    pub fn weight(&self, x: f64) -> Result<f64, OrthopolyError> {
        let (lo, hi) = self.interval;
        if !(x >= lo && x <= hi) {
            return Err(OrthopolyError::OutOfInterval { x, lo, hi });
        }
        Ok(match self.kind {
            FamilyKind::Legendre | FamilyKind::ShiftedLegendre => 1.0,
            FamilyKind::Laguerre => (-x).exp(),
            FamilyKind::Hermite => (-x * x).exp(),
            FamilyKind::ShiftedHermite => {
                let u = 2.0 * x - 1.0;
                (-u * u).exp()
            }
        })
    }

    /// Values `P_0(x), …, P_n(x)` from one pass of the orthonormal
    /// recurrence `√β_{k+1} P_{k+1} = (x - α_k) P_k - √β_k P_{k-1}`.
    pub fn eval_upto(&self, n: usize, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        let beta0 = self.monic_recurrence(0).1;
        let mut prev = 0.0;
        let mut cur = 1.0 / beta0.sqrt();
        out.push(Self::sign(self.kind, 0) * cur);
        for k in 0..n {
            let (alpha_k, beta_k) = self.monic_recurrence(k);
            let beta_next = self.monic_recurrence(k + 1).1;
            let next = ((x - alpha_k) * cur - beta_k.sqrt() * prev) / beta_next.sqrt();
            prev = cur;
            cur = next;
            out.push(Self::sign(self.kind, k + 1) * cur);
        }
        out
    }

    /// Value of the `n`-th orthonormal polynomial at `x`.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        *self.eval_upto(n, x).last().unwrap()
    }

    /// Value and derivative of the `n`-th orthonormal polynomial at `x`.
    pub fn eval_with_derivative(&self, n: usize, x: f64) -> (f64, f64) {
        let beta0 = self.monic_recurrence(0).1;
        let mut p_prev = 0.0;
        let mut p = 1.0 / beta0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        for k in 0..n {
            let (alpha_k, beta_k) = self.monic_recurrence(k);
            let sb_next = self.monic_recurrence(k + 1).1.sqrt();
            let sb = beta_k.sqrt();
            let p_next = ((x - alpha_k) * p - sb * p_prev) / sb_next;
            let d_next = (p + (x - alpha_k) * d - sb * d_prev) / sb_next;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        let s = Self::sign(self.kind, n);
        (s * p, s * d)
    }

    /// Monomial coefficients of the `n`-th orthonormal polynomial.
    ///
    /// Built from the monic recurrence and scaled by the normalization
    /// factor; the path is exact at these degrees but less well-conditioned
    /// than the recurrence, so it is reserved for antiderivatives and
    /// leading coefficients.
    pub fn coeffs(&self, n: usize) -> Result<Polynomial, OrthopolyError> {
        if n > MAX_COEFF_DEGREE {
            return Err(OrthopolyError::DegreeTooLarge {
                n,
                max: MAX_COEFF_DEGREE,
            });
        }
        let mut prev = Polynomial::zero();
        let mut cur = Polynomial::constant(1.0);
        for k in 0..n {
            let (alpha_k, beta_k) = self.monic_recurrence(k);
            // π_{k+1} = (x - α_k)·π_k - β_k·π_{k-1}
            let next = cur
                .mul_x_pow(1)
                .add(&cur.scale(-alpha_k))
                .add(&prev.scale(-beta_k));
            prev = cur;
            cur = next;
        }
        Ok(cur.scale(self.normalization_factor(n)))
    }

    /// `∫_0^1 P_n(x) dx`, from the exact antiderivative.
    pub fn integral_01(&self, n: usize) -> Result<f64, OrthopolyError> {
        Ok(self.integral_0_tau(n)?.eval(1.0))
    }

    /// The antiderivative `τ ↦ ∫_0^τ P_n(x) dx` as a polynomial vanishing
    /// at 0.
    pub fn integral_0_tau(&self, n: usize) -> Result<Polynomial, OrthopolyError> {
        Ok(self.coeffs(n)?.antiderivative())
    }

    /// Expands `p` in this family's orthonormal basis, returning the
    /// coefficients of `P_0 … P_deg(p)`; exact triangular back-substitution
    /// on the monomial representations.
    pub fn expand_in_basis(&self, p: &Polynomial) -> Result<Vec<f64>, OrthopolyError> {
        let deg = p.degree();
        let mut residual = p.clone();
        let mut out = vec![0.0; deg + 1];
        for n in (0..=deg).rev() {
            let basis = self.coeffs(n)?;
            let c = residual.coeff(n) / basis.leading_coefficient();
            out[n] = c;
            residual = residual.add(&basis.scale(-c));
        }
        Ok(out)
    }
}
