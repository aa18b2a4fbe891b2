//! Inhomogeneous problems `ẋ = A(t)x + b(t)`, `x(t0) = x0`.
//!
//! Two independent routes are provided. [`solve`] homogenises the system by
//! appending a constant state and runs the series engine on the block family
//! `[[A, b], [0, 0]]`. [`solve_voc`] evaluates the variation-of-constants
//! formula `x(t) = Φ(t; t0)(x0 + ∫ Φ(t0; τ) b(τ) dτ)` literally, inverting the
//! stored transition matrix at Gauss-Legendre nodes.

use crate::error::{Error, Result};
use crate::matrep::{
    ConstMatrix, Interval, MatrixFunction, Poly, PolyMatrix, PolyVector, SampledMatrix,
    VectorFunction,
};
use crate::pbs::{transition, TransitionOptions, TransitionResult};
use crate::quadrature::{gauss_legendre, mapped_rule};

/// Default Gauss-Legendre nodes per transition step in [`solve_voc`].
pub const DEFAULT_VOC_NODES: usize = 20;

/// Conditioning threshold above which `Φ(τ; t0)` is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Full statement of an initial value problem.
#[derive(Debug, Clone)]
pub struct CauchyProblem {
    pub a: MatrixFunction,
    pub b: Option<VectorFunction>,
    pub t0: f64,
    pub x0: Vec<f64>,
    pub domain: Interval,
    pub options: TransitionOptions,
}

impl CauchyProblem {
    pub fn new(
        a: MatrixFunction,
        b: Option<VectorFunction>,
        t0: f64,
        x0: Vec<f64>,
        domain: Interval,
        options: TransitionOptions,
    ) -> Result<Self> {
        options.validate()?;
        domain.check(t0)?;
        let d = a.dim();
        if x0.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x0.len(),
            });
        }
        if let Some(declared) = a.domain() {
            if !declared.contains_interval(&domain) {
                return Err(Error::Domain {
                    t: if declared.contains(domain.lo()) {
                        domain.hi()
                    } else {
                        domain.lo()
                    },
                    lo: declared.lo(),
                    hi: declared.hi(),
                });
            }
        }
        if let Some(b) = &b {
            if b.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: b.dim(),
                });
            }
            if let Some(declared) = b.domain() {
                if !declared.contains_interval(&domain) {
                    return Err(Error::Domain {
                        t: if declared.contains(domain.lo()) {
                            domain.hi()
                        } else {
                            domain.lo()
                        },
                        lo: declared.lo(),
                        hi: declared.hi(),
                    });
                }
            }
        }
        Ok(Self {
            a,
            b,
            t0,
            x0,
            domain,
            options,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn tol(&self) -> f64 {
        self.options.tol
    }

    /// Same problem with another initial state.
    pub fn with_initial_state(&self, x0: Vec<f64>) -> Result<Self> {
        Self::new(
            self.a.clone(),
            self.b.clone(),
            self.t0,
            x0,
            self.domain,
            self.options,
        )
    }
}

/// State at one time together with its error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub state: Vec<f64>,
    pub error_bound: f64,
}

/// Piecewise-polynomial solution on the range between `t0` and `t_end`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    pub t_end: f64,
    pub x0: Vec<f64>,
    /// `(start, end, x)` with `x` expanded about `start`.
    pub pieces: Vec<(f64, f64, PolyVector)>,
    /// Bounds both the state error and the defect `ẋ - Ax - b` on the range.
    pub error_bound: f64,
    state_bound: f64,
}

impl Trajectory {
    pub fn covered(&self) -> Interval {
        Interval::spanning(self.t0, self.t_end)
    }

    fn locate(&self, tau: f64) -> Result<Option<usize>> {
        self.covered().check(tau)?;
        if tau == self.t0 || self.pieces.is_empty() {
            return Ok(None);
        }
        Ok(Some(
            self.pieces
                .iter()
                .position(|(s, e, _)| Interval::spanning(*s, *e).contains(tau))
                .unwrap_or(self.pieces.len() - 1),
        ))
    }

    pub fn eval(&self, tau: f64) -> Result<Vec<f64>> {
        Ok(match self.locate(tau)? {
            None => self.x0.clone(),
            Some(i) => self.pieces[i].2.eval(tau),
        })
    }

    /// Polynomial derivative of the piece containing `tau`.
    pub fn derivative(&self, tau: f64) -> Result<Vec<f64>> {
        let idx = match self.locate(tau)? {
            Some(i) => i,
            None if self.pieces.is_empty() => return Ok(vec![0.0; self.x0.len()]),
            None => 0,
        };
        Ok(self.pieces[idx].2.derivative().eval(tau))
    }

    /// Bound on the state error alone.
    pub fn state_bound(&self) -> f64 {
        self.state_bound
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn embed_block(a: &PolyMatrix, b: &PolyVector) -> Result<PolyMatrix> {
    let d = a.dim();
    let origin = a.origin();
    let b = b.recenter(origin);
    let mut entries = Vec::with_capacity((d + 1) * (d + 1));
    for i in 0..d {
        entries.extend(a.entries()[i * d..(i + 1) * d].iter().cloned());
        entries.push(b.entries()[i].clone());
    }
    entries.extend((0..=d).map(|_| Poly::zero(origin)));
    PolyMatrix::new(origin, d + 1, entries)
}

fn pieces_of_matrix(a: &MatrixFunction) -> Option<Vec<(Option<Interval>, PolyMatrix)>> {
    match a {
        MatrixFunction::Polynomial(m) => Some(vec![(None, m.clone())]),
        MatrixFunction::Piecewise(p) => {
            Some(p.iter().map(|(iv, m)| (Some(*iv), m.clone())).collect())
        }
        MatrixFunction::Sampled(_) => None,
    }
}

fn pieces_of_vector(b: &VectorFunction) -> Option<Vec<(Option<Interval>, PolyVector)>> {
    match b {
        VectorFunction::Polynomial(v) => Some(vec![(None, v.clone())]),
        VectorFunction::Piecewise(p) => {
            Some(p.iter().map(|(iv, v)| (Some(*iv), v.clone())).collect())
        }
        VectorFunction::Sampled(_) => None,
    }
}

fn piece_at<T: Clone>(pieces: &[(Option<Interval>, T)], t: f64) -> T {
    pieces
        .iter()
        .find(|(iv, _)| iv.is_none_or(|iv| t < iv.hi()))
        .unwrap_or(&pieces[pieces.len() - 1])
        .1
        .clone()
}

/// Homogenised family `[[A, b], [0, 0]]` of dimension `d + 1`.
pub fn augment(a: &MatrixFunction, b: &VectorFunction) -> Result<MatrixFunction> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.dim(),
        });
    }
    let domain = match (a.domain(), b.domain()) {
        (Some(x), Some(y)) if x != y => {
            return Err(Error::InvalidArgument(format!(
                "domain mismatch: A on [{}, {}], b on [{}, {}]",
                x.lo(),
                x.hi(),
                y.lo(),
                y.hi()
            )))
        }
        (x, y) => x.or(y),
    };

    if let (Some(ap), Some(bp)) = (pieces_of_matrix(a), pieces_of_vector(b)) {
        if let (MatrixFunction::Polynomial(m), VectorFunction::Polynomial(v)) = (a, b) {
            return Ok(MatrixFunction::Polynomial(embed_block(m, v)?));
        }
        let domain = domain.expect("a piecewise operand declares its domain");
        let mut cuts: Vec<f64> = ap
            .iter()
            .filter_map(|(iv, _)| iv.map(|iv| iv.lo()))
            .chain(bp.iter().filter_map(|(iv, _)| iv.map(|iv| iv.lo())))
            .filter(|&c| domain.lo() < c && c < domain.hi())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut points = vec![domain.lo()];
        points.extend(cuts);
        points.push(domain.hi());
        let pieces = points
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let block = embed_block(&piece_at(&ap, mid), &piece_at(&bp, mid))?;
                Ok((Interval::new(w[0], w[1])?, block))
            })
            .collect::<Result<Vec<_>>>()?;
        return MatrixFunction::piecewise(pieces);
    }

    let domain = domain.expect("a sampled operand declares its domain");
    let a = a.clone();
    let b = b.clone();
    let sampled = SampledMatrix::new(d + 1, domain, move |t| {
        let am = a.eval(t).map_err(|e| e.to_string())?;
        let bv = b.eval(t).map_err(|e| e.to_string())?;
        let mut m = ConstMatrix::zeros(d + 1);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = am[(i, j)];
            }
            m[(i, d)] = bv[i];
        }
        Ok(m)
    })?;
    Ok(MatrixFunction::Sampled(sampled))
}

fn homogeneous_route(p: &CauchyProblem, t: f64) -> Result<(TransitionResult, Vec<f64>)> {
    p.domain.check(t)?;
    match &p.b {
        None => Ok((transition(&p.a, p.t0, t, &p.options)?, p.x0.clone())),
        Some(b) => {
            let aug = augment(&p.a, b)?;
            let mut z0 = p.x0.clone();
            z0.push(1.0);
            Ok((transition(&aug, p.t0, t, &p.options)?, z0))
        }
    }
}

/// Piecewise-polynomial solution between `t0` and `t`.
pub fn solve_trajectory(p: &CauchyProblem, t: f64) -> Result<Trajectory> {
    let d = p.dim();
    let (result, z0) = homogeneous_route(p, t)?;
    let scale = 1.0 + max_norm(&p.x0);
    let mut pieces = Vec::with_capacity(result.steps.len());
    let mut defect: f64 = 0.0;
    for (step, left) in result.steps.iter().zip(&result.left_factors) {
        let z_start = left.mul_vec(&z0);
        let column = PolyVector::constant(step.start, &z_start)?;
        let z = step.phi.mul_vec(&column)?;
        let x = PolyVector::new(step.start, z.entries()[..d].to_vec())?;
        pieces.push((step.start, step.end, x));
        defect = defect.max(step.defect_bound * left.norm() * scale);
    }
    let state_bound = result.total_bound * scale;
    Ok(Trajectory {
        t0: p.t0,
        t_end: t,
        x0: p.x0.clone(),
        pieces,
        error_bound: state_bound.max(defect),
        state_bound,
    })
}

/// `x(t)` by the homogenised series route.
pub fn solve(p: &CauchyProblem, t: f64) -> Result<Solution> {
    let (result, z0) = homogeneous_route(p, t)?;
    let mut state = result.final_value().mul_vec(&z0);
    state.truncate(p.dim());
    if t == p.t0 {
        state = p.x0.clone();
    }
    Ok(Solution {
        state,
        error_bound: result.total_bound * (1.0 + max_norm(&p.x0)),
    })
}

/// `x(t)` from the variation-of-constants formula, with `quad_nodes`
/// Gauss-Legendre nodes on every transition step.
pub fn solve_voc(p: &CauchyProblem, t: f64, quad_nodes: usize) -> Result<Vec<f64>> {
    if quad_nodes < 2 {
        return Err(Error::InvalidArgument(format!(
            "quad_nodes must be at least 2, got {quad_nodes}"
        )));
    }
    p.domain.check(t)?;
    let phi = transition(&p.a, p.t0, t, &p.options)?;
    let mut inner = p.x0.clone();
    if let Some(b) = &p.b {
        let (nodes, weights) = gauss_legendre(quad_nodes);
        for (step, left) in phi.steps.iter().zip(&phi.left_factors) {
            for (tau, w) in mapped_rule(&nodes, &weights, step.start, step.end) {
                let forward = &step.eval(tau) * left;
                let inverse = forward.inverse().ok_or(Error::Singular {
                    t: tau,
                    condition: f64::INFINITY,
                })?;
                let condition = forward.norm() * inverse.norm();
                if condition.is_nan() || condition > MAX_CONDITION {
                    return Err(Error::Singular { t: tau, condition });
                }
                let v = inverse.mul_vec(&b.eval(tau)?);
                for (acc, vi) in inner.iter_mut().zip(v) {
                    *acc += w * vi;
                }
            }
        }
    }
    Ok(phi.final_value().mul_vec(&inner))
}
