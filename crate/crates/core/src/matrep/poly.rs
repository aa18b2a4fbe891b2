use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients below this magnitude are flushed to zero after multiply and
/// integrate.
pub const FLUSH_THRESHOLD: f64 = 1e-300;

/// Univariate polynomial `Σ c_k (t - origin)^k` in canonical form.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial
/// has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    origin: f64,
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(origin: f64, coeffs: Vec<f64>) -> Self {
        let mut p = Self { origin, coeffs };
        p.strip();
        p
    }

    pub fn zero(origin: f64) -> Self {
        Self {
            origin,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(origin: f64, value: f64) -> Self {
        Self::new(origin, vec![value])
    }

    /// `scale * (t - origin)^power`
    pub fn monomial(origin: f64, power: usize, scale: f64) -> Self {
        let mut coeffs = vec![0.0; power + 1];
        coeffs[power] = scale;
        Self::new(origin, coeffs)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `(t - origin)^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    fn strip(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == 0.0) {
            self.coeffs.pop();
        }
    }

    fn flush(&mut self) {
        for c in &mut self.coeffs {
            if c.abs() < FLUSH_THRESHOLD {
                *c = 0.0;
            }
        }
        self.strip();
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        let x = t - self.origin;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Poly::new(self.origin, coeffs)
    }

    /// Antiderivative `q` with `q' = self` and `q(lower) = 0`.
    pub fn integrate(&self, lower: f64) -> Poly {
        if self.is_zero() {
            return Poly::zero(self.origin);
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        let mut q = Poly {
            origin: self.origin,
            coeffs,
        };
        if lower != self.origin {
            let shift = q.eval(lower);
            q.coeffs[0] -= shift;
        }
        q.flush();
        q
    }

    fn check_origin(&self, other: &Poly) -> Result<()> {
        if self.origin == other.origin {
            Ok(())
        } else {
            Err(Error::OriginMismatch {
                left: self.origin,
                right: other.origin,
            })
        }
    }

    /// Exact coefficient convolution. Both factors must share an origin.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_origin(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.origin));
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = Poly {
            origin: self.origin,
            coeffs,
        };
        p.flush();
        Ok(p)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_origin(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(Poly::new(self.origin, coeffs))
    }

    pub fn scale(&self, factor: f64) -> Poly {
        Poly::new(
            self.origin,
            self.coeffs.iter().map(|&c| c * factor).collect(),
        )
    }

    /// Re-expands the polynomial about `new_origin` (binomial shift).
    pub fn recenter(&self, new_origin: f64) -> Poly {
        if new_origin == self.origin || self.is_zero() {
            return Poly {
                origin: new_origin,
                coeffs: self.coeffs.clone(),
            };
        }
        // Taylor shift by repeated synthetic division: p(t) = Σ c_k (s + h)^k
        // with s = t - new_origin and h = new_origin - origin.
        let h = new_origin - self.origin;
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                c[k] += h * c[k + 1];
            }
        }
        Poly::new(new_origin, c)
    }

    /// `Σ |c_k| r^k`, an upper bound for `|p(t)|` whenever `|t - origin| ≤ r`.
    pub fn abs_bound(&self, radius: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * radius + c.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_coeffs(p: &Poly, expected: &[f64]) {
        assert_eq!(p.coeffs().len(), expected.len(), "{p:?}");
        for (a, b) in p.coeffs().iter().zip(expected) {
            assert!(
                (a - b).abs() <= 1e-14 * (1.0 + b.abs()),
                "{p:?} vs {expected:?}"
            );
        }
    }

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let p = Poly::new(0.0, vec![1.0, 0.0, 0.0]);
        assert_eq!(p.coeffs(), &[1.0]);
        assert_eq!(p.degree(), Some(0));
        let z = Poly::new(3.0, vec![0.0, 0.0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn integrate_constant_and_linear() {
        assert_coeffs(&Poly::constant(0.0, 1.0).integrate(0.0), &[0.0, 1.0]);
        assert_coeffs(
            &Poly::monomial(0.0, 1, 1.0).integrate(0.0),
            &[0.0, 0.0, 0.5],
        );
    }

    #[test]
    fn integrate_with_shifted_lower_limit() {
        // antiderivative of 1 + 2t is t + t^2; subtract its value at 1
        let q = Poly::new(0.0, vec![1.0, 2.0]).integrate(1.0);
        assert_coeffs(&q, &[-2.0, 1.0, 1.0]);
        assert_eq!(q.eval(1.0), 0.0);
        assert_eq!(q.origin(), 0.0);
    }

    #[test]
    fn multiplication_examples() {
        let one_plus_t = Poly::new(0.0, vec![1.0, 1.0]);
        let t = Poly::monomial(0.0, 1, 1.0);
        assert_coeffs(&one_plus_t.mul(&t).unwrap(), &[0.0, 1.0, 1.0]);
        assert!(Poly::zero(0.0).mul(&one_plus_t).unwrap().is_zero());
        let one_minus_t = Poly::new(0.0, vec![1.0, -1.0]);
        assert_coeffs(&one_minus_t.mul(&one_plus_t).unwrap(), &[1.0, 0.0, -1.0]);
    }

    #[test]
    fn multiplication_rejects_origin_mismatch() {
        let err = Poly::constant(0.0, 1.0)
            .mul(&Poly::constant(1.0, 1.0))
            .unwrap_err();
        assert!(matches!(err, Error::OriginMismatch { .. }));
    }

    #[test]
    fn tiny_products_are_flushed() {
        let p = Poly::new(0.0, vec![1e-200, 1.0]);
        let q = p.mul(&p).unwrap();
        assert_eq!(q.coeff(0), 0.0);
        assert_eq!(q.degree(), Some(2));
    }

    #[test]
    fn recenter_examples() {
        let t = Poly::monomial(0.0, 1, 1.0);
        let same = t.recenter(0.0);
        assert_eq!(same, t);
        assert_coeffs(&t.recenter(1.0), &[1.0, 1.0]);
        let c = 2.5;
        assert_coeffs(
            &Poly::monomial(0.0, 2, 1.0).recenter(c),
            &[c * c, 2.0 * c, 1.0],
        );
    }

    #[test]
    fn abs_bound_dominates_values() {
        let p = Poly::new(1.0, vec![0.3, -2.0, 0.7, -0.1]);
        for i in 0..=100 {
            let t = 0.5 + i as f64 * 0.01;
            assert!(p.eval(t).abs() <= p.abs_bound(0.5));
        }
    }
}
