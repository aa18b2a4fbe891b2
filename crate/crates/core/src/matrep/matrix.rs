use serde::{Deserialize, Serialize};

use super::dense::ConstMatrix;
use super::poly::Poly;
use super::Interval;
use crate::error::{Error, Result};

/// Square matrix of polynomials sharing one origin, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyMatrix {
    origin: f64,
    dim: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    /// Builds a matrix from row-major entries. Every entry is recentered to
    /// `origin` if it was expanded elsewhere.
    pub fn new(origin: f64, dim: usize, entries: Vec<Poly>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let entries = entries
            .into_iter()
            .map(|p| {
                if p.origin() == origin {
                    p
                } else {
                    p.recenter(origin)
                }
            })
            .collect();
        Ok(Self {
            origin,
            dim,
            entries,
        })
    }

    /// Row-major grid of coefficient lists, all about `origin`.
    pub fn from_coeffs(origin: f64, rows: &[Vec<Vec<f64>>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|c| Poly::new(origin, c.clone())));
        }
        Self::new(origin, dim, entries)
    }

    pub fn zero(origin: f64, dim: usize) -> Self {
        Self {
            origin,
            dim,
            entries: vec![Poly::zero(origin); dim * dim],
        }
    }

    pub fn identity(origin: f64, dim: usize) -> Self {
        Self::constant(origin, &ConstMatrix::identity(dim))
    }

    pub fn constant(origin: f64, m: &ConstMatrix) -> Self {
        Self {
            origin,
            dim: m.dim(),
            entries: m
                .as_slice()
                .iter()
                .map(|&v| Poly::constant(origin, v))
                .collect(),
        }
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    /// Highest entry degree; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn eval(&self, t: f64) -> ConstMatrix {
        let data = self.entries.iter().map(|p| p.eval(t)).collect();
        ConstMatrix::from_row_major(self.dim, data).expect("square by construction")
    }

    /// Coefficient matrix of `(t - origin)^k`.
    pub fn coefficient(&self, k: usize) -> ConstMatrix {
        let data = self.entries.iter().map(|p| p.coeff(k)).collect();
        ConstMatrix::from_row_major(self.dim, data).expect("square by construction")
    }

    /// All coefficient matrices up to the degree (empty for the zero matrix).
    pub fn coefficients(&self) -> Vec<ConstMatrix> {
        match self.degree() {
            Some(deg) => (0..=deg).map(|k| self.coefficient(k)).collect(),
            None => Vec::new(),
        }
    }

    fn check_compatible(&self, other: &PolyMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.origin != other.origin {
            return Err(Error::OriginMismatch {
                left: self.origin,
                right: other.origin,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_compatible(other)?;
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Poly::zero(self.origin);
                for k in 0..n {
                    let a = self.entry(i, k);
                    let b = other.entry(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            origin: self.origin,
            dim: n,
            entries,
        })
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            origin: self.origin,
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, factor: f64) -> PolyMatrix {
        self.map(|p| p.scale(factor))
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_const(&self, m: &ConstMatrix) -> Result<PolyMatrix> {
        self.mul(&PolyMatrix::constant(self.origin, m))
    }

    /// Entry-wise antiderivative vanishing at `lower`.
    pub fn integrate(&self, lower: f64) -> PolyMatrix {
        self.map(|p| p.integrate(lower))
    }

    pub fn derivative(&self) -> PolyMatrix {
        self.map(Poly::derivative)
    }

    /// Same matrix function expanded about `new_origin`.
    pub fn recenter(&self, new_origin: f64) -> PolyMatrix {
        if new_origin == self.origin {
            return self.clone();
        }
        let mut out = self.map(|p| p.recenter(new_origin));
        out.origin = new_origin;
        out
    }

    pub fn trace(&self) -> Poly {
        (0..self.dim).fold(Poly::zero(self.origin), |acc, i| {
            acc.add(self.entry(i, i)).expect("shared origin")
        })
    }

    pub fn mul_vec(&self, v: &PolyVector) -> Result<PolyVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        if v.origin() != self.origin {
            return Err(Error::OriginMismatch {
                left: self.origin,
                right: v.origin(),
            });
        }
        let n = self.dim;
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Poly::zero(self.origin);
            for k in 0..n {
                acc = acc.add(&self.entry(i, k).mul(&v.entries()[k])?)?;
            }
            entries.push(acc);
        }
        PolyVector::new(self.origin, entries)
    }

    fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            origin: self.origin,
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// Upper bound for `sup_{t ∈ J} ‖M(t)‖` in the max-row-sum norm, from
/// coefficient magnitudes: `|p(t)| ≤ Σ |c_k| r^k` with `r` the largest
/// distance from the origin to an endpoint of `J`.
pub fn bound_sup_norm(m: &PolyMatrix, interval: Interval) -> f64 {
    let r = (interval.lo() - m.origin)
        .abs()
        .max((interval.hi() - m.origin).abs());
    (0..m.dim)
        .map(|i| (0..m.dim).map(|j| m.entry(i, j).abs_bound(r)).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Column vector of polynomials sharing one origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyVector {
    origin: f64,
    entries: Vec<Poly>,
}

impl PolyVector {
    pub fn new(origin: f64, entries: Vec<Poly>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument(
                "vector dimension must be positive".into(),
            ));
        }
        let entries = entries
            .into_iter()
            .map(|p| {
                if p.origin() == origin {
                    p
                } else {
                    p.recenter(origin)
                }
            })
            .collect();
        Ok(Self { origin, entries })
    }

    pub fn from_coeffs(origin: f64, entries: &[Vec<f64>]) -> Result<Self> {
        Self::new(
            origin,
            entries
                .iter()
                .map(|c| Poly::new(origin, c.clone()))
                .collect(),
        )
    }

    pub fn constant(origin: f64, values: &[f64]) -> Result<Self> {
        Self::new(
            origin,
            values.iter().map(|&v| Poly::constant(origin, v)).collect(),
        )
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.entries.iter().map(|p| p.eval(t)).collect()
    }

    pub fn derivative(&self) -> PolyVector {
        PolyVector {
            origin: self.origin,
            entries: self.entries.iter().map(Poly::derivative).collect(),
        }
    }

    pub fn recenter(&self, new_origin: f64) -> PolyVector {
        PolyVector {
            origin: new_origin,
            entries: self
                .entries
                .iter()
                .map(|p| p.recenter(new_origin))
                .collect(),
        }
    }
}
