use std::f64::consts::PI;

use super::dense::ConstMatrix;
use super::function::{Interval, SampledMatrix, SampledVector};
use super::matrix::{PolyMatrix, PolyVector};
use super::poly::Poly;
use crate::error::Result;

/// Default interpolation degree per step for sampled families.
pub const DEFAULT_INTERP_DEGREE: usize = 16;

/// Chebyshev points of the second kind mapped onto `interval`, as `(s, t)`
/// pairs with `s ∈ [-1, 1]` the reference coordinate.
fn chebyshev_nodes(interval: Interval, degree: usize) -> Vec<(f64, f64)> {
    let mid = interval.midpoint();
    let half = 0.5 * interval.len();
    if degree == 0 {
        return vec![(0.0, mid)];
    }
    (0..=degree)
        .map(|j| {
            let s = (PI * j as f64 / degree as f64).cos();
            (s, mid + half * s)
        })
        .collect()
}

/// Monomial coefficients (in the reference variable `s`) of the polynomial
/// interpolating `values` at the second-kind Chebyshev nodes.
fn monomial_from_samples(values: &[f64]) -> Vec<f64> {
    let n = values.len() - 1;
    if n == 0 {
        return values.to_vec();
    }
    // Chebyshev coefficients by the discrete cosine sum with halved end terms.
    let cheb: Vec<f64> = (0..=n)
        .map(|k| {
            let sum: f64 = values
                .iter()
                .enumerate()
                .map(|(j, &f)| {
                    let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                    w * f * (PI * (j * k) as f64 / n as f64).cos()
                })
                .sum();
            let w = if k == 0 || k == n { 1.0 } else { 2.0 };
            w * sum / n as f64
        })
        .collect();

    // T_k in the monomial basis via T_{k+1} = 2s T_k - T_{k-1}.
    let mut out = vec![0.0; n + 1];
    let mut prev = vec![1.0];
    let mut curr = vec![0.0, 1.0];
    out[0] += cheb[0];
    if n >= 1 {
        out[1] += cheb[1];
    }
    for &ck in cheb.iter().skip(2) {
        let mut next = vec![0.0; curr.len() + 1];
        for (i, &c) in curr.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        for (i, &c) in next.iter().enumerate() {
            out[i] += ck * c;
        }
        prev = curr;
        curr = next;
    }
    out
}

fn to_poly(mid: f64, half: f64, mono: &[f64]) -> Poly {
    if half == 0.0 {
        return Poly::constant(mid, mono[0]);
    }
    let mut scale = 1.0;
    let coeffs = mono
        .iter()
        .map(|&m| {
            let c = m * scale;
            scale /= half;
            c
        })
        .collect();
    Poly::new(mid, coeffs)
}

/// Entry-wise interpolant of `f` on `interval` at `degree + 1` Chebyshev
/// points, expanded about the midpoint of `interval`.
pub fn interpolate(f: &SampledMatrix, interval: Interval, degree: usize) -> Result<PolyMatrix> {
    f.domain().check(interval.lo())?;
    f.domain().check(interval.hi())?;
    let nodes = chebyshev_nodes(interval, degree);
    let samples: Vec<ConstMatrix> = nodes
        .iter()
        .map(|&(_, t)| f.eval(t))
        .collect::<Result<_>>()?;
    let d = f.dim();
    let mid = interval.midpoint();
    let half = 0.5 * interval.len();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let values: Vec<f64> = samples.iter().map(|m| m[(i, j)]).collect();
            entries.push(to_poly(mid, half, &monomial_from_samples(&values)));
        }
    }
    PolyMatrix::new(mid, d, entries)
}

/// Vector counterpart of [`interpolate`].
pub fn interpolate_vector(
    f: &SampledVector,
    interval: Interval,
    degree: usize,
) -> Result<PolyVector> {
    f.domain().check(interval.lo())?;
    f.domain().check(interval.hi())?;
    let nodes = chebyshev_nodes(interval, degree);
    let samples: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&(_, t)| f.eval(t))
        .collect::<Result<_>>()?;
    let mid = interval.midpoint();
    let half = 0.5 * interval.len();
    let entries = (0..f.dim())
        .map(|i| {
            let values: Vec<f64> = samples.iter().map(|v| v[i]).collect();
            to_poly(mid, half, &monomial_from_samples(&values))
        })
        .collect();
    PolyVector::new(mid, entries)
}
