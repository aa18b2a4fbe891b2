//! Peano-Baker series engine.
//!
//! The state-transition matrix of `ẋ = A(t)x` is the sum of iterated
//! integrals `I_n`, each obtained from the previous one by
//! `I_{n+1}(t) = ∫_{s}^{t} A(τ) I_n(τ) dτ`. For polynomial `A` every term is a
//! polynomial matrix, so the recursion is carried out exactly in coefficient
//! space. Truncation is controlled a priori: on a step where
//! `∫‖A‖ ≤ mu`, the neglected tail is majorised by `Σ_{k>N} mu^k / k!`.
//!
//! Long intervals are cut into steps with `mu ≤ mu_max` and chained through
//! the flow property `Φ(t; t0) = Φ(t; s) Φ(s; t0)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrep::{
    bound_sup_norm, interpolate, ConstMatrix, Interval, MatrixFunction, PolyMatrix,
    DEFAULT_DEGREE_CAP, DEFAULT_INTERP_DEGREE,
};

/// Knobs shared by every transition computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionOptions {
    /// Target for the composed truncation bound; see [`step_tolerance`].
    pub tol: f64,
    /// Largest admissible `∫‖A‖` over a single step.
    pub mu_max: f64,
    /// Largest polynomial degree a series term may reach.
    pub degree_cap: usize,
    /// Interpolation degree used per step for sampled families.
    pub interp_degree: usize,
}

impl Default for TransitionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            mu_max: 1.0,
            degree_cap: DEFAULT_DEGREE_CAP,
            interp_degree: DEFAULT_INTERP_DEGREE,
        }
    }
}

impl TransitionOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.mu_max <= 0.0 || !self.mu_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "mu_max must be positive and finite, got {}",
                self.mu_max
            )));
        }
        Ok(())
    }
}

/// One term `I_n` of the series, expanded about the step start.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTerm {
    pub index: usize,
    pub value: PolyMatrix,
}

impl SeriesTerm {
    /// `I_0`, the identity.
    pub fn identity(origin: f64, dim: usize) -> Self {
        Self {
            index: 0,
            value: PolyMatrix::identity(origin, dim),
        }
    }
}

/// `I_{n+1}(t) = ∫_{step_start}^{t} A(τ) I_n(τ) dτ`, exactly in coefficient space.
pub fn next_term(
    a: &PolyMatrix,
    term: &SeriesTerm,
    step_start: f64,
    degree_cap: usize,
) -> Result<SeriesTerm> {
    let index = term.index + 1;
    let value = a.mul(&term.value)?.integrate(step_start);
    match value.degree() {
        Some(degree) if degree > degree_cap => Err(Error::DegreeCap {
            cap: degree_cap,
            index,
            degree,
        }),
        _ => Ok(SeriesTerm { index, value }),
    }
}

/// `I_0, …, I_order` about `step_start`. `a` is recentered to `step_start`.
pub fn series_terms(
    a: &PolyMatrix,
    step_start: f64,
    order: usize,
    degree_cap: usize,
) -> Result<Vec<SeriesTerm>> {
    let a = a.recenter(step_start);
    let mut terms = Vec::with_capacity(order + 1);
    terms.push(SeriesTerm::identity(step_start, a.dim()));
    for _ in 0..order {
        let next = next_term(&a, terms.last().expect("non-empty"), step_start, degree_cap)?;
        terms.push(next);
    }
    Ok(terms)
}

/// `Σ_{n=0}^{order} I_n` about `step_start`, summed from the highest index down.
pub fn partial_sum(
    a: &PolyMatrix,
    step_start: f64,
    order: usize,
    degree_cap: usize,
) -> Result<PolyMatrix> {
    let terms = series_terms(a, step_start, order, degree_cap)?;
    sum_terms(&terms)
}

fn sum_terms(terms: &[SeriesTerm]) -> Result<PolyMatrix> {
    let mut iter = terms.iter().rev();
    let mut acc = iter.next().expect("at least I_0").value.clone();
    for term in iter {
        acc = acc.add(&term.value)?;
    }
    Ok(acc)
}

/// Smallest `N ≥ 0` with `mu^{N+1}/(N+1)! · e^mu ≤ tol`.
///
/// The left-hand side majorises `Σ_{k>N} mu^k/k!`. Evaluated in log space so
/// large `mu` cannot overflow.
pub fn truncation_order(mu: f64, tol: f64) -> usize {
    assert!(
        mu >= 0.0 && mu.is_finite(),
        "mu must be finite and non-negative"
    );
    assert!(tol > 0.0, "tol must be positive");
    if mu == 0.0 {
        return 0;
    }
    let ln_mu = mu.ln();
    let ln_tol = tol.ln();
    // log of mu^{N+1}/(N+1)! for N = 0
    let mut ln_term = ln_mu;
    let mut n = 0usize;
    while ln_term + mu > ln_tol {
        n += 1;
        ln_term += ln_mu - ((n + 1) as f64).ln();
    }
    n
}

/// `Σ_{k=N+1}^{∞} mu^k/k!`, summed directly to avoid cancellation against `e^mu`.
pub fn tail_sum(mu: f64, order: usize) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let ln_first = (order + 1) as f64 * mu.ln() - ln_factorial(order + 1);
    let mut term = ln_first.exp();
    let mut sum = 0.0;
    let mut k = order + 1;
    loop {
        sum += term;
        k += 1;
        term *= mu / k as f64;
        if term <= f64::EPSILON * sum * 1e-3 || term == 0.0 {
            break;
        }
        if k > order + 10_000 {
            break;
        }
    }
    sum
}

/// Series solution on one step `start → end` (either direction).
#[derive(Debug, Clone, Serialize)]
pub struct StepTransition {
    pub start: f64,
    pub end: f64,
    /// Partial sum `Σ_{n=0}^{order} I_n`, expanded about `start`.
    pub phi: PolyMatrix,
    pub order: usize,
    /// Coefficient bound on `∫‖A‖` over the step.
    pub mu: f64,
    /// `Σ_{k>order} mu^k/k!` plus [`rounding_allowance`].
    pub tail_bound: f64,
    /// `phi(end)`.
    pub end_value: ConstMatrix,
    /// Bound on `sup ‖Φ‖` over the step, covering both the partial sum and the
    /// exact factor.
    pub norm_bound: f64,
    /// Bound on the defect `‖phi' - A phi‖ = ‖A I_order‖` over the step.
    pub defect_bound: f64,
}

impl StepTransition {
    pub fn interval(&self) -> Interval {
        Interval::spanning(self.start, self.end)
    }

    pub fn eval(&self, t: f64) -> ConstMatrix {
        self.phi.eval(t)
    }
}

/// Single-step partial sum with the order picked from the tail majorant.
pub fn transition_step(
    a: &PolyMatrix,
    start: f64,
    end: f64,
    tol: f64,
    degree_cap: usize,
) -> Result<StepTransition> {
    let a = a.recenter(start);
    let span = Interval::spanning(start, end);
    let mu = bound_sup_norm(&a, span) * span.len();
    if !mu.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "norm bound of A is not finite on [{}, {}]",
            span.lo(),
            span.hi()
        )));
    }
    let order = truncation_order(mu, tol);
    step_with_order(&a, start, end, mu, order, degree_cap)
}

/// Like [`transition_step`] but with a caller-chosen truncation order.
pub fn transition_step_with_order(
    a: &PolyMatrix,
    start: f64,
    end: f64,
    order: usize,
    degree_cap: usize,
) -> Result<StepTransition> {
    let a = a.recenter(start);
    let span = Interval::spanning(start, end);
    let mu = bound_sup_norm(&a, span) * span.len();
    step_with_order(&a, start, end, mu, order, degree_cap)
}

fn step_with_order(
    a: &PolyMatrix,
    start: f64,
    end: f64,
    mu: f64,
    order: usize,
    degree_cap: usize,
) -> Result<StepTransition> {
    let terms = series_terms(a, start, order, degree_cap)?;
    let phi = sum_terms(&terms)?;
    let degree = phi.degree().unwrap_or(0);
    let tail_bound = tail_sum(mu, order) + rounding_allowance(mu, order, degree, a.dim());
    let end_value = phi.eval(end);
    let norm_bound = bound_sup_norm(&phi, Interval::spanning(start, end)) + tail_bound;
    let len = (end - start).abs();
    let defect_bound = if len > 0.0 && mu > 0.0 {
        (mu / len) * (order as f64 * mu.ln() - ln_factorial(order)).exp()
    } else {
        0.0
    };
    Ok(StepTransition {
        start,
        end,
        phi,
        order,
        mu,
        tail_bound,
        end_value,
        norm_bound,
        defect_bound,
    })
}

/// Floating-point allowance for building and evaluating a partial sum.
///
/// Coefficients of `Σ I_n` have absolute row sums at most `e^mu`, and each
/// value passes through `order` products and sums plus a Horner evaluation of
/// `degree` steps, each contributing a relative error of `ε` per operand.
pub fn rounding_allowance(mu: f64, order: usize, degree: usize, dim: usize) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    4.0 * (order + degree + dim) as f64 * f64::EPSILON * mu.exp()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Piecewise-polynomial `Φ(·; t0)` between `t0` and `t_end`.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionResult {
    pub t0: f64,
    pub t_end: f64,
    pub dim: usize,
    pub steps: Vec<StepTransition>,
    /// `Φ(step.start; t0)` for every step.
    pub left_factors: Vec<ConstMatrix>,
    /// Error bound for `Φ(τ; t0)` over the whole covered range.
    pub total_bound: f64,
    /// Error bound valid up to the end of each step.
    cumulative_bounds: Vec<f64>,
}

impl TransitionResult {
    pub fn covered(&self) -> Interval {
        Interval::spanning(self.t0, self.t_end)
    }

    fn locate(&self, tau: f64) -> Result<Option<usize>> {
        let covered = self.covered();
        covered.check(tau)?;
        if tau == self.t0 || self.steps.is_empty() {
            return Ok(None);
        }
        let idx = self
            .steps
            .iter()
            .position(|s| s.interval().contains(tau))
            .unwrap_or(self.steps.len() - 1);
        Ok(Some(idx))
    }

    /// `Φ(τ; t0)` for any `τ` between `t0` and `t_end`.
    pub fn eval(&self, tau: f64) -> Result<ConstMatrix> {
        Ok(match self.locate(tau)? {
            None => ConstMatrix::identity(self.dim),
            Some(i) => &self.steps[i].eval(tau) * &self.left_factors[i],
        })
    }

    /// Error bound for `Φ(τ; t0)`; zero at `t0`.
    pub fn bound_at(&self, tau: f64) -> Result<f64> {
        Ok(match self.locate(tau)? {
            None => 0.0,
            Some(i) => self.cumulative_bounds[i],
        })
    }

    /// `Φ(t_end; t0)`.
    pub fn final_value(&self) -> ConstMatrix {
        match self.steps.last() {
            None => ConstMatrix::identity(self.dim),
            Some(last) => &last.end_value * self.left_factors.last().expect("one per step"),
        }
    }

    /// Highest truncation order used by any step.
    pub fn max_order(&self) -> usize {
        self.steps.iter().map(|s| s.order).max().unwrap_or(0)
    }
}

/// Polynomial representation of `A` valid on the step `start → end`.
fn local_polynomial(
    a: &MatrixFunction,
    start: f64,
    end: f64,
    options: &TransitionOptions,
) -> Result<PolyMatrix> {
    let span = Interval::spanning(start, end);
    match a {
        MatrixFunction::Polynomial(m) => Ok(m.clone()),
        MatrixFunction::Piecewise(pieces) => {
            let mid = span.midpoint();
            pieces
                .iter()
                .find(|(iv, _)| iv.contains_interval(&span) && iv.contains(mid))
                .map(|(_, m)| m.clone())
                .ok_or(Error::Domain {
                    t: mid,
                    lo: pieces[0].0.lo(),
                    hi: pieces[pieces.len() - 1].0.hi(),
                })
        }
        MatrixFunction::Sampled(s) => interpolate(s, span, options.interp_degree),
    }
}

const MAX_STEPS: usize = 1_000_000;

/// Splits `t0 → t` into steps with `∫‖A‖ ≤ mu_max`, respecting piece boundaries.
fn plan_steps(
    a: &MatrixFunction,
    t0: f64,
    t: f64,
    options: &TransitionOptions,
) -> Result<Vec<(f64, f64, PolyMatrix, f64)>> {
    let forward = t >= t0;
    let mut cuts = a.breakpoints_within(t0.min(t), t0.max(t));
    if !forward {
        cuts.reverse();
    }
    let mut points = vec![t0];
    points.extend(cuts);
    points.push(t);

    let mut planned = Vec::new();
    for seg in points.windows(2) {
        // Work list in reverse so `pop` yields the earliest piece first.
        let mut pending = vec![(seg[0], seg[1])];
        while let Some((s, e)) = pending.pop() {
            let local = local_polynomial(a, s, e, options)?;
            let span = Interval::spanning(s, e);
            let mu = bound_sup_norm(&local.recenter(s), span) * span.len();
            if !mu.is_finite() {
                return Err(Error::Subdivision {
                    lo: span.lo(),
                    hi: span.hi(),
                });
            }
            if mu <= options.mu_max {
                planned.push((s, e, local, mu));
                if planned.len() > MAX_STEPS {
                    return Err(Error::Subdivision {
                        lo: t0.min(t),
                        hi: t0.max(t),
                    });
                }
                continue;
            }
            if span.len() <= 1e-12 * (1.0 + s.abs()) {
                return Err(Error::Subdivision {
                    lo: span.lo(),
                    hi: span.hi(),
                });
            }
            let pieces = ((mu / options.mu_max).ceil() as usize).clamp(2, 1 << 16);
            let h = (e - s) / pieces as f64;
            for k in (0..pieces).rev() {
                let a_k = s + h * k as f64;
                let b_k = if k + 1 == pieces {
                    e
                } else {
                    s + h * (k + 1) as f64
                };
                pending.push((a_k, b_k));
            }
        }
    }
    Ok(planned)
}

/// Smallest per-step tolerance handed to a step is `tol * STEP_TOL_FLOOR`.
pub const STEP_TOL_FLOOR: f64 = 1e-12;

/// Per-step tolerance so that the composed bound stays near `tol`.
///
/// Each step factor has norm at most `e^mu`, so `n` steps whose tails are all
/// `tol / (n e^{Σ mu})` accumulate to roughly `tol`.
pub fn step_tolerance(tol: f64, mus: impl Iterator<Item = f64>) -> f64 {
    let (n, mu_sum) = mus.fold((0usize, 0.0), |(n, s), mu| (n + 1, s + mu));
    if n == 0 {
        return tol;
    }
    let ln_scale = (n as f64).ln() + mu_sum;
    let ln_step = tol.ln() - ln_scale;
    ln_step.exp().max(tol * STEP_TOL_FLOOR).min(tol)
}

/// `Φ_A(·; t0)` on the range between `t0` and `t`, which may lie on either side.
pub fn transition(
    a: &MatrixFunction,
    t0: f64,
    t: f64,
    options: &TransitionOptions,
) -> Result<TransitionResult> {
    options.validate()?;
    a.check_domain(t0)?;
    a.check_domain(t)?;
    let dim = a.dim();
    let plan = if t == t0 {
        Vec::new()
    } else {
        plan_steps(a, t0, t, options)?
    };

    let mut steps = Vec::with_capacity(plan.len());
    let mut left_factors = Vec::with_capacity(plan.len());
    let mut cumulative_bounds = Vec::with_capacity(plan.len());
    let step_tol = step_tolerance(options.tol, plan.iter().map(|p| p.3));
    let mut left = ConstMatrix::identity(dim);
    let mut bound = 0.0;
    let mut norm_product = 1.0;
    for (start, end, local, _) in plan {
        let step = transition_step(&local, start, end, step_tol, options.degree_cap)?;
        // ‖ΠT − ΠC‖ ≤ Σ_i tail_i Π_{j≠i} B_j, accumulated step by step.
        bound = bound * step.norm_bound + step.tail_bound * norm_product;
        norm_product *= step.norm_bound;
        let next_left = &step.end_value * &left;
        left_factors.push(left);
        cumulative_bounds.push(bound);
        left = next_left;
        steps.push(step);
    }

    Ok(TransitionResult {
        t0,
        t_end: t,
        dim,
        steps,
        left_factors,
        total_bound: bound,
        cumulative_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrep::Poly;

    fn example1(a: f64) -> PolyMatrix {
        PolyMatrix::from_coeffs(
            0.0,
            &[vec![vec![1.0], vec![0.0, 1.0]], vec![vec![], vec![a]]],
        )
        .unwrap()
    }

    fn close(p: &Poly, expected: &[f64]) {
        for (k, &e) in expected.iter().enumerate() {
            let c = p.coeff(k);
            assert!(
                (c - e).abs() <= 1e-14 * (1.0 + e.abs()),
                "coeff {k}: {c} vs {e}"
            );
        }
        assert!(p.coeffs().len() <= expected.len());
    }

    #[test]
    fn first_two_terms_of_triangular_family() {
        let a_param = 3.0;
        let a = example1(a_param);
        let i0 = SeriesTerm::identity(0.0, 2);
        let i1 = next_term(&a, &i0, 0.0, 64).unwrap();
        assert_eq!(i1.index, 1);
        close(i1.value.entry(0, 0), &[0.0, 1.0]);
        close(i1.value.entry(0, 1), &[0.0, 0.0, 0.5]);
        assert!(i1.value.entry(1, 0).is_zero());
        close(i1.value.entry(1, 1), &[0.0, a_param]);

        let i2 = next_term(&a, &i1, 0.0, 64).unwrap();
        close(i2.value.entry(0, 0), &[0.0, 0.0, 0.5]);
        close(
            i2.value.entry(0, 1),
            &[0.0, 0.0, 0.0, (1.0 + 2.0 * a_param) / 6.0],
        );
        close(i2.value.entry(1, 1), &[0.0, 0.0, a_param * a_param / 2.0]);
    }

    #[test]
    fn zero_family_yields_zero_terms() {
        let a = PolyMatrix::zero(0.0, 2);
        let term = SeriesTerm {
            index: 4,
            value: example1(1.0).mul(&example1(2.0)).unwrap(),
        };
        let next = next_term(&a, &term, 0.0, 64).unwrap();
        assert_eq!(next.index, 5);
        assert!(next.value.is_zero());
    }

    #[test]
    fn step_tolerance_shrinks_with_growth() {
        assert_eq!(step_tolerance(1e-10, std::iter::empty()), 1e-10);
        let one = step_tolerance(1e-10, [0.0].into_iter());
        assert!((one - 1e-10).abs() < 1e-24);
        let four = step_tolerance(1e-10, [1.0; 4].into_iter());
        assert!((four - 1e-10 / (4.0 * 4f64.exp())).abs() < 1e-22);
        assert_eq!(step_tolerance(1e-10, [50.0; 10].into_iter()), 1e-22);
    }

    #[test]
    fn degree_cap_is_reported() {
        let a = example1(2.0);
        let err = series_terms(&a, 0.0, 10, 5).unwrap_err();
        match err {
            Error::DegreeCap { cap, index, .. } => {
                assert_eq!(cap, 5);
                // the top-right entry of I_n has degree n + 1; I_5 reaches 6
                assert_eq!(index, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    /// Independent oracle: scan N and evaluate the closed majorant directly.
    fn order_by_scan(mu: f64, tol: f64) -> usize {
        let mut fact = 1.0;
        for n in 0usize.. {
            fact *= (n + 1) as f64;
            if mu.powi(n as i32 + 1) / fact * mu.exp() <= tol {
                return n;
            }
        }
        unreachable!()
    }

    #[test]
    fn truncation_order_examples() {
        assert_eq!(truncation_order(0.0, 1e-12), 0);
        assert_eq!(truncation_order(0.0, 1e-300), 0);
        assert_eq!(order_by_scan(1.0, 1e-12), 15);
        assert_eq!(truncation_order(1.0, 1e-12), 15);
        let n = truncation_order(2.0, 1e-12);
        assert_eq!(n, order_by_scan(2.0, 1e-12));
        assert!(n <= 25);
        let bound = |n: usize| {
            2f64.powi(n as i32 + 1) / (1..=n + 1).map(|k| k as f64).product::<f64>() * 2f64.exp()
        };
        assert!(bound(n) <= 1e-12 && bound(n - 1) > 1e-12);
    }

    #[test]
    fn tail_sum_matches_closed_form() {
        // Σ_{k>N} mu^k/k! = e^mu - Σ_{k≤N} mu^k/k!, fine for small N
        let mu: f64 = 0.8;
        for n in 0..4 {
            let head: f64 = (0..=n)
                .map(|k| mu.powi(k as i32) / (1..=k).map(|j| j as f64).product::<f64>())
                .sum();
            let expected = mu.exp() - head;
            assert!((tail_sum(mu, n) - expected).abs() < 1e-15);
        }
        assert_eq!(tail_sum(0.0, 3), 0.0);
    }

    #[test]
    fn zero_family_step_is_identity() {
        let step = transition_step(&PolyMatrix::zero(0.0, 2), 0.0, 5.0, 1e-12, 64).unwrap();
        assert_eq!(step.order, 0);
        assert_eq!(step.tail_bound, 0.0);
        assert_eq!(step.end_value, ConstMatrix::identity(2));
    }

    #[test]
    fn step_on_triangular_family() {
        let e = std::f64::consts::E;
        let step = transition_step(&example1(2.0), 0.0, 1.0, 1e-12, 64).unwrap();
        let expected = ConstMatrix::from_rows(&[[e, e], [0.0, e * e]]);
        // a single step with mu = 2 has a tail bound near 1e-13
        assert!((&step.end_value - &expected).max_abs() < 1e-11);
        assert!(step.mu == 2.0);
        assert_eq!(step.eval(0.0), ConstMatrix::identity(2));
    }

    #[test]
    fn transition_to_start_is_identity() {
        let f = MatrixFunction::Polynomial(example1(2.0));
        let r = transition(&f, 0.3, 0.3, &TransitionOptions::default()).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.eval(0.3).unwrap(), ConstMatrix::identity(2));
        assert_eq!(r.bound_at(0.3).unwrap(), 0.0);
        assert!(r.eval(0.4).is_err());
    }

    #[test]
    fn steps_tile_the_range_in_both_directions() {
        let f = MatrixFunction::Polynomial(example1(2.0));
        for (t0, t) in [(0.0, 3.0), (1.0, -2.0)] {
            let r = transition(&f, t0, t, &TransitionOptions::default()).unwrap();
            assert_eq!(r.steps[0].start, t0);
            assert_eq!(r.steps.last().unwrap().end, t);
            for w in r.steps.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
            assert!(r.steps.iter().all(|s| s.mu <= 1.0));
            assert!(r.total_bound >= 0.0);
        }
    }

    #[test]
    fn domain_violation_is_reported() {
        let piece = MatrixFunction::piecewise(vec![(
            Interval::new(0.0, 1.0).unwrap(),
            PolyMatrix::identity(0.0, 1),
        )])
        .unwrap();
        assert!(matches!(
            transition(&piece, 0.0, 2.0, &TransitionOptions::default()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn piecewise_steps_split_at_breakpoints() {
        let f = MatrixFunction::piecewise(vec![
            (
                Interval::new(0.0, 1.0).unwrap(),
                PolyMatrix::identity(0.0, 1),
            ),
            (
                Interval::new(1.0, 2.0).unwrap(),
                PolyMatrix::identity(0.0, 1).scale(-1.0),
            ),
        ])
        .unwrap();
        let r = transition(&f, 0.0, 2.0, &TransitionOptions::with_tol(1e-13)).unwrap();
        assert!(r.steps.iter().any(|s| s.end == 1.0));
        // x' = x then x' = -x: back to 1 at t = 2, e at t = 1
        assert!((r.eval(1.0).unwrap()[(0, 0)] - std::f64::consts::E).abs() < 1e-12);
        assert!((r.final_value()[(0, 0)] - 1.0).abs() < 1e-12);
    }
}
