//! Hamiltonian and scalar test problems.

use crate::integrator::IvpProblem;

/// Scalar `ż = z`, `z(0) = 1`, exact solution `e^t`.
pub fn exponential() -> IvpProblem {
    IvpProblem::new(0.0, vec![1.0], |_, z, out| out[0] = z[0])
        .with_exact(|t| vec![t.exp()])
        .with_labels(vec!["z".into()])
}

/// Planar two-body problem with `H(p, q) = (p₁² + p₂²)/2 - 1/√(q₁² + q₂²)`,
/// started on the unit circular orbit: state `(p₁, p₂, q₁, q₂) = (0, 1, 1, 0)`
/// with exact solution `(-sin t, cos t, cos t, sin t)` and `H = -1/2`.
pub fn kepler() -> IvpProblem {
    IvpProblem::new(0.0, vec![0.0, 1.0, 1.0, 0.0], |_, z, out| {
        let (p1, p2, q1, q2) = (z[0], z[1], z[2], z[3]);
        let r3 = (q1 * q1 + q2 * q2).sqrt().powi(3);
        out[0] = -q1 / r3;
        out[1] = -q2 / r3;
        out[2] = p1;
        out[3] = p2;
    })
    .with_exact(|t| vec![-t.sin(), t.cos(), t.cos(), t.sin()])
    .with_energy(|z| {
        let (p1, p2, q1, q2) = (z[0], z[1], z[2], z[3]);
        (p1 * p1 + p2 * p2) / 2.0 - 1.0 / (q1 * q1 + q2 * q2).sqrt()
    })
    .with_labels(vec!["p1".into(), "p2".into(), "q1".into(), "q2".into()])
}

/// Planar pendulum with `H(p, q) = p²/2 - cos q`, state `(p, q) = (0.3, 1.0)`.
/// No closed-form solution is attached.
pub fn pendulum() -> IvpProblem {
    IvpProblem::new(0.0, vec![0.3, 1.0], |_, z, out| {
        out[0] = -z[1].sin();
        out[1] = z[0];
    })
    .with_energy(|z| z[0] * z[0] / 2.0 - z[1].cos())
    .with_labels(vec!["p".into(), "q".into()])
}

/// Problem lookup by CLI name.
pub fn by_name(name: &str) -> Option<IvpProblem> {
    match name {
        "exponential" => Some(exponential()),
        "kepler" => Some(kepler()),
        "pendulum" => Some(pendulum()),
        _ => None,
    }
}

/// Names accepted by [`by_name`].
pub const PROBLEM_NAMES: [&str; 3] = ["exponential", "kepler", "pendulum"];
