//! Commuting families and the closed form `Φ = exp(∫A)`.
//!
//! For polynomial `A(t) = Σ A_j (t - c)^j` the pointwise condition
//! `[A(t), A(s)] = 0` holds for all `t, s` exactly when every pair of
//! coefficient matrices commutes, so that test is finite and exact. The
//! weaker condition `[A(t), ∫_{t0}^{t} A] = 0` can only be sampled.

use crate::error::Result;
use crate::matrep::{Interval, PolyMatrix, VectorFunction};
use crate::pbs::truncation_order;
use crate::quadrature::{gauss_legendre, mapped_rule};

pub use crate::matrep::ConstMatrix;

/// Relative scale for the default commutator tolerance.
pub const COMMUTE_RTOL: f64 = 1e-12;

/// Grid resolution of the sampled weak-commutation test.
pub const WEAK_GRID: usize = 33;

/// `1e-12 × scale²`, where `scale` is the largest coefficient-matrix norm.
pub fn default_commute_tol(a: &PolyMatrix) -> f64 {
    let scale = a
        .coefficients()
        .iter()
        .map(ConstMatrix::norm)
        .fold(1.0, f64::max);
    COMMUTE_RTOL * scale * scale
}

/// True iff all pairwise commutators of the coefficient matrices have norm `≤ tol`.
pub fn is_commuting(a: &PolyMatrix, tol: f64) -> bool {
    let coeffs = a.coefficients();
    coeffs.iter().enumerate().all(|(i, ci)| {
        coeffs[i + 1..]
            .iter()
            .all(|cj| ci.commutator(cj).norm() <= tol)
    })
}

/// Sampled check of `‖[A(t), ∫_{J.lo}^{t} A]‖ ≤ tol` on 33 equispaced points of `J`.
///
/// A grid verdict, not a proof.
pub fn is_weakly_commuting(a: &PolyMatrix, interval: Interval, tol: f64) -> bool {
    let antiderivative = a.integrate(interval.lo());
    (0..WEAK_GRID).all(|k| {
        let t = interval.lo() + interval.len() * k as f64 / (WEAK_GRID - 1) as f64;
        a.eval(t).commutator(&antiderivative.eval(t)).norm() <= tol
    })
}

/// `∫_{t0}^{t} A(τ) dτ`, exact.
pub fn integral_of(a: &PolyMatrix, t0: f64, t: f64) -> ConstMatrix {
    a.integrate(t0).eval(t)
}

/// Matrix exponential by scaling and squaring around a truncated Taylor series.
///
/// The argument is halved until its norm is at most 1/2; the Taylor cutoff is
/// picked with the same factorial tail majorant as the series engine.
pub fn matrix_exp(m: &ConstMatrix, tol: f64) -> ConstMatrix {
    let n = m.dim();
    let norm = m.norm();
    if norm == 0.0 {
        return ConstMatrix::identity(n);
    }
    let mut squarings = 0i32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as i32;
    }
    let scaled = m.scale(0.5f64.powi(squarings));
    // relative tolerance after squaring: errors grow roughly by 2^s
    let local_tol = (tol * 0.5f64.powi(squarings.min(60))).max(f64::MIN_POSITIVE);
    let order = truncation_order(scaled.norm(), local_tol).max(1);

    // Horner: I + X(I + X/2(I + X/3(...)))
    let id = ConstMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=order).rev() {
        acc = &id + &(&scaled * &acc).scale(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// `Φ(t; t0) = exp(∫_{t0}^{t} A)`, valid when `A` commutes (not re-checked).
pub fn transition_commuting(a: &PolyMatrix, t0: f64, t: f64, tol: f64) -> ConstMatrix {
    matrix_exp(&integral_of(a, t0, t), tol)
}

/// Closed-form solution of the inhomogeneous commuting problem,
/// `x(t) = e^{∫A}(x0 + ∫_{t0}^{t} e^{-∫_{t0}^{τ}A} b(τ) dτ)`, with the outer
/// integral by composite Gauss-Legendre on `panels` equal panels.
pub fn solve_commuting(
    a: &PolyMatrix,
    b: Option<&VectorFunction>,
    t0: f64,
    x0: &[f64],
    t: f64,
    tol: f64,
    panels: usize,
) -> Result<Vec<f64>> {
    let mut inner = x0.to_vec();
    if let Some(b) = b {
        let antiderivative = a.integrate(t0);
        let (nodes, weights) = gauss_legendre(20);
        let panels = panels.max(1);
        let h = (t - t0) / panels as f64;
        for p in 0..panels {
            let lo = t0 + h * p as f64;
            let hi = if p + 1 == panels { t } else { lo + h };
            for (tau, w) in mapped_rule(&nodes, &weights, lo, hi) {
                let e = matrix_exp(&antiderivative.eval(tau).scale(-1.0), tol);
                let v = e.mul_vec(&b.eval(tau)?);
                for (acc, vi) in inner.iter_mut().zip(v) {
                    *acc += w * vi;
                }
            }
        }
    }
    Ok(transition_commuting(a, t0, t, tol).mul_vec(&inner))
}
