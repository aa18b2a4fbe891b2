use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::dense::ConstMatrix;
use super::matrix::{PolyMatrix, PolyVector};
use crate::error::{Error, Result};

/// Closed time interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Interval spanned by two times in either order.
    pub fn spanning(a: f64, b: f64) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub(crate) fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::Domain {
                t,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

type MatrixEvaluator = dyn Fn(f64) -> std::result::Result<ConstMatrix, String> + Send + Sync;
type VectorEvaluator = dyn Fn(f64) -> std::result::Result<Vec<f64>, String> + Send + Sync;

/// A matrix family given only through point evaluations on a declared interval.
#[derive(Clone)]
pub struct SampledMatrix {
    dim: usize,
    domain: Interval,
    evaluator: Arc<MatrixEvaluator>,
}

impl SampledMatrix {
    pub fn new(
        dim: usize,
        domain: Interval,
        evaluator: impl Fn(f64) -> std::result::Result<ConstMatrix, String> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimension must be positive".into(),
            ));
        }
        if !domain.lo.is_finite() || !domain.hi.is_finite() {
            return Err(Error::InvalidInterval {
                lo: domain.lo,
                hi: domain.hi,
            });
        }
        Ok(Self {
            dim,
            domain,
            evaluator: Arc::new(evaluator),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn eval(&self, t: f64) -> Result<ConstMatrix> {
        self.domain.check(t)?;
        let m = (self.evaluator)(t).map_err(|message| Error::Evaluator { t, message })?;
        if m.dim() != self.dim {
            return Err(Error::Evaluator {
                t,
                message: format!(
                    "evaluator returned a {0}x{0} matrix, expected {1}x{1}",
                    m.dim(),
                    self.dim
                ),
            });
        }
        Ok(m)
    }
}

impl fmt::Debug for SampledMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledMatrix")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// The coefficient family `A(t)` of a linear system.
#[derive(Debug, Clone)]
pub enum MatrixFunction {
    /// A single polynomial matrix, valid for every `t`.
    Polynomial(PolyMatrix),
    /// Polynomial pieces on contiguous sub-intervals.
    Piecewise(Vec<(Interval, PolyMatrix)>),
    /// Point evaluations, interpolated per step.
    Sampled(SampledMatrix),
}

impl MatrixFunction {
    /// Validates contiguity of the pieces and their shared dimension.
    pub fn piecewise(pieces: Vec<(Interval, PolyMatrix)>) -> Result<Self> {
        check_pieces(pieces.iter().map(|(iv, m)| (*iv, m.dim())))?;
        Ok(Self::Piecewise(pieces))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polynomial(m) => m.dim(),
            Self::Piecewise(pieces) => pieces[0].1.dim(),
            Self::Sampled(s) => s.dim(),
        }
    }

    /// Declared domain; `None` when the family is defined on the whole line.
    pub fn domain(&self) -> Option<Interval> {
        match self {
            Self::Polynomial(_) => None,
            Self::Piecewise(pieces) => Some(Interval {
                lo: pieces[0].0.lo,
                hi: pieces[pieces.len() - 1].0.hi,
            }),
            Self::Sampled(s) => Some(s.domain()),
        }
    }

    pub fn check_domain(&self, t: f64) -> Result<()> {
        match self.domain() {
            Some(d) => d.check(t),
            None if t.is_finite() => Ok(()),
            None => Err(Error::Domain {
                t,
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }),
        }
    }

    pub fn eval(&self, t: f64) -> Result<ConstMatrix> {
        match self {
            Self::Polynomial(m) => {
                self.check_domain(t)?;
                Ok(m.eval(t))
            }
            Self::Piecewise(pieces) => {
                let idx = locate_piece(pieces.iter().map(|(iv, _)| *iv), t)?;
                Ok(pieces[idx].1.eval(t))
            }
            Self::Sampled(s) => s.eval(t),
        }
    }

    /// Interior breakpoints strictly inside `(lo, hi)`, ascending.
    pub fn breakpoints_within(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            Self::Piecewise(pieces) => pieces
                .iter()
                .skip(1)
                .map(|(iv, _)| iv.lo)
                .filter(|&b| lo < b && b < hi)
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Column-vector counterpart of [`SampledMatrix`].
#[derive(Clone)]
pub struct SampledVector {
    dim: usize,
    domain: Interval,
    evaluator: Arc<VectorEvaluator>,
}

impl SampledVector {
    pub fn new(
        dim: usize,
        domain: Interval,
        evaluator: impl Fn(f64) -> std::result::Result<Vec<f64>, String> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "vector dimension must be positive".into(),
            ));
        }
        Ok(Self {
            dim,
            domain,
            evaluator: Arc::new(evaluator),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        self.domain.check(t)?;
        let v = (self.evaluator)(t).map_err(|message| Error::Evaluator { t, message })?;
        if v.len() != self.dim {
            return Err(Error::Evaluator {
                t,
                message: format!(
                    "evaluator returned {} components, expected {}",
                    v.len(),
                    self.dim
                ),
            });
        }
        Ok(v)
    }
}

impl fmt::Debug for SampledVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledVector")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// The forcing term `b(t)` of an inhomogeneous system.
#[derive(Debug, Clone)]
pub enum VectorFunction {
    Polynomial(PolyVector),
    Piecewise(Vec<(Interval, PolyVector)>),
    Sampled(SampledVector),
}

impl VectorFunction {
    pub fn piecewise(pieces: Vec<(Interval, PolyVector)>) -> Result<Self> {
        check_pieces(pieces.iter().map(|(iv, v)| (*iv, v.dim())))?;
        Ok(Self::Piecewise(pieces))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polynomial(v) => v.dim(),
            Self::Piecewise(pieces) => pieces[0].1.dim(),
            Self::Sampled(s) => s.dim(),
        }
    }

    pub fn domain(&self) -> Option<Interval> {
        match self {
            Self::Polynomial(_) => None,
            Self::Piecewise(pieces) => Some(Interval {
                lo: pieces[0].0.lo,
                hi: pieces[pieces.len() - 1].0.hi,
            }),
            Self::Sampled(s) => Some(s.domain()),
        }
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        match self {
            Self::Polynomial(v) => Ok(v.eval(t)),
            Self::Piecewise(pieces) => {
                let idx = locate_piece(pieces.iter().map(|(iv, _)| *iv), t)?;
                Ok(pieces[idx].1.eval(t))
            }
            Self::Sampled(s) => s.eval(t),
        }
    }
}

fn check_pieces(pieces: impl Iterator<Item = (Interval, usize)>) -> Result<()> {
    let mut prev: Option<(Interval, usize)> = None;
    let mut count = 0;
    for (iv, dim) in pieces {
        count += 1;
        if let Some((p, d)) = prev {
            if iv.lo != p.hi {
                return Err(Error::InvalidArgument(format!(
                    "piece [{}, {}] does not start where [{}, {}] ends",
                    iv.lo, iv.hi, p.lo, p.hi
                )));
            }
            if dim != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: dim,
                });
            }
        }
        prev = Some((iv, dim));
    }
    if count == 0 {
        return Err(Error::InvalidArgument(
            "piecewise family needs at least one piece".into(),
        ));
    }
    Ok(())
}

/// Index of the piece containing `t`; shared endpoints resolve to the later piece.
fn locate_piece(
    mut pieces: impl ExactSizeIterator<Item = Interval> + Clone,
    t: f64,
) -> Result<usize> {
    let n = pieces.len();
    let first = pieces.clone().next().expect("non-empty");
    let last = pieces.clone().last().expect("non-empty");
    let whole = Interval {
        lo: first.lo,
        hi: last.hi,
    };
    whole.check(t)?;
    Ok(pieces
        .position(|iv| t >= iv.lo && t < iv.hi)
        .unwrap_or(n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_rejects_reversed_bounds() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 0.0).is_err());
        assert!(Interval::new(0.0, 0.0).unwrap().is_empty());
    }

    #[test]
    fn piecewise_must_be_contiguous() {
        let m = PolyMatrix::identity(0.0, 1);
        let gap = MatrixFunction::piecewise(vec![
            (Interval::new(0.0, 1.0).unwrap(), m.clone()),
            (Interval::new(1.5, 2.0).unwrap(), m.clone()),
        ]);
        assert!(gap.is_err());
        let ok = MatrixFunction::piecewise(vec![
            (Interval::new(0.0, 1.0).unwrap(), m.clone()),
            (Interval::new(1.0, 2.0).unwrap(), m.scale(2.0)),
        ])
        .unwrap();
        assert_eq!(ok.eval(0.5).unwrap()[(0, 0)], 1.0);
        assert_eq!(ok.eval(1.0).unwrap()[(0, 0)], 2.0);
        assert_eq!(ok.eval(2.0).unwrap()[(0, 0)], 2.0);
        assert!(matches!(ok.eval(2.5), Err(Error::Domain { .. })));
        assert_eq!(ok.breakpoints_within(0.0, 2.0), vec![1.0]);
    }

    #[test]
    fn sampled_reports_failures_with_node() {
        let f = SampledMatrix::new(1, Interval::new(0.0, 1.0).unwrap(), |t| {
            if t > 0.5 {
                Err("boom".into())
            } else {
                Ok(ConstMatrix::identity(1))
            }
        })
        .unwrap();
        assert!(f.eval(0.25).is_ok());
        match f.eval(0.75) {
            Err(Error::Evaluator { t, message }) => {
                assert_eq!(t, 0.75);
                assert_eq!(message, "boom");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
