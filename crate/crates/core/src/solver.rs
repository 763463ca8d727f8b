//! Constrained maximization of the slice functional and verification of
//! `Ric g = cT`.
//!
//! On the slice `{y : sum d_i z_i / y_i = 1}` of an index set `J`, both the
//! functional and the trace are (-1)-homogeneous, so with `y = exp(w)` the
//! problem becomes the unconstrained maximization of
//! `F(w) = Shat(exp w) / trace(exp w)`, which is invariant under
//! `w -> w + c(1, .., 1)`. The last log-coordinate is pinned to 0 and the
//! remaining ones are driven by a Newton-type ascent with eigenvalue-modified
//! Hessian and backtracking line search. The slice point is recovered by
//! the exact projection `y = exp(w) * trace(exp w)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::curvature::{self, RicciCoefficients};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::space::{HomogeneousSpace, MetricCoefficients, TensorCoefficients};

/// Convergence threshold on the log-coordinate gradient norm.
pub const GRADIENT_TOLERANCE: f64 = 1e-9;
/// Coordinate ratio beyond which an iterate counts as escaping the slice.
pub const ESCAPE_RATIO: f64 = 1e8;
/// Residual below which `Ric g = cT` counts as verified.
pub const VERIFY_TOLERANCE: f64 = 1e-8;

/// Newton steps longer than this (in log-coordinates) mean the iterate is
/// still moving, even when the gradient is already tiny.
const NEWTON_STEP_TOLERANCE: f64 = 1e-10;
/// Gradient norm at which polishing stops.
const POLISH_TOLERANCE: f64 = 1e-14;
/// Largest log-coordinate step per iteration.
const MAX_STEP: f64 = 1.0;
/// Restart points are spread over `[-START_RANGE, START_RANGE]` per log-coordinate.
const START_RANGE: f64 = 3.0;
/// Relative value window for reporting several stationary points.
const VALUE_WINDOW: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            restarts: 16,
            seed: 0,
            max_iterations: 10_000,
        }
    }
}

/// A converged local maximum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Evidence that the supremum is approached at the slice boundary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeEvidence {
    /// Coordinates growing without bound relative to the others.
    pub growing: IndexSet,
    /// Largest-to-smallest coordinate ratio of the escaping iterate.
    pub ratio: f64,
    /// Best functional value seen along escaping runs.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationReport {
    pub set: IndexSet,
    /// Slice coordinates of the best local maximum (or of the best escaping
    /// iterate when nothing converged), in increasing index order.
    pub argmax: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    pub first_order_residual: f64,
    /// `|trace - 1|` at `argmax`.
    pub constraint_residual: f64,
    pub escape: Option<EscapeEvidence>,
    /// Distinct local maxima with value within a relative `1e-9` of the best.
    pub stationary_points: Vec<StationaryPoint>,
}

/// Outcome of checking `Ric g = cT`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationResult {
    pub c: f64,
    /// `max_i |R_i - c z_i| / max(1, |c z_i|)`.
    pub residual: f64,
    pub positive: bool,
    pub verified: bool,
    pub ricci: RicciCoefficients,
}

/// Maximizes the slice functional of `set` over `{trace = 1}`.
pub fn maximize_hat_s_on_slice(
    space: &HomogeneousSpace,
    set: IndexSet,
    z: &TensorCoefficients,
    options: &SolverOptions,
) -> Result<OptimizationReport> {
    space.check_len(z.len())?;
    space.check_set(set)?;
    SliceProblem::new(space, set, z).maximize(options)
}

/// Maximizes `S` over `M_T = {g : tr_g T = 1}`.
pub fn maximize_s_on_mt(
    space: &HomogeneousSpace,
    z: &TensorCoefficients,
    options: &SolverOptions,
) -> Result<OptimizationReport> {
    maximize_hat_s_on_slice(space, space.full_set(), z, options)
}

/// Computes the Ricci coefficients of `x` and the least-squares constant `c`
/// in `Ric g = cT`, weighting summands by `d_i / x_i^2`.
pub fn verify_prescribed_ricci(
    space: &HomogeneousSpace,
    x: &MetricCoefficients,
    z: &TensorCoefficients,
) -> Result<VerificationResult> {
    space.check_len(z.len())?;
    let ricci = curvature::ricci_coefficients(space, x)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..space.num_summands() {
        let w = space.dim(i) / (x[i] * x[i]);
        num += w * ricci.coefficients[i] * z[i];
        den += w * z[i] * z[i];
    }
    let c = num / den;
    let residual = ricci
        .coefficients
        .iter()
        .zip(z.iter())
        .map(|(r, z)| (r - c * z).abs() / (c * z).abs().max(1.0))
        .fold(0.0, f64::max);
    let positive = c > 0.0;
    Ok(VerificationResult {
        c,
        residual,
        positive,
        verified: positive && residual < VERIFY_TOLERANCE,
        ricci,
    })
}

/// `S(h(t))` along the curve `h(t) = phi(t) y` on `set`, `t` on the
/// complement, with `phi(t) = t / (t - L)` and `L = sum over the complement
/// of d_i z_i`. The curve stays in `M_T` and tends to `Shat(y)` as
/// `t -> infinity`.
pub fn escape_curve_s(
    space: &HomogeneousSpace,
    set: IndexSet,
    y: &[f64],
    z: &TensorCoefficients,
    t: f64,
) -> Result<f64> {
    let x = escape_curve_point(space, set, y, z, t)?;
    let trace = curvature::trace_full(space, space.full_set(), &x, z);
    debug_assert!((trace - 1.0).abs() < 1e-12, "h(t) left M_T: trace {trace}");
    curvature::scalar_curvature(space, &MetricCoefficients::new(x)?)
}

/// The metric coefficients of `h(t)`.
pub fn escape_curve_point(
    space: &HomogeneousSpace,
    set: IndexSet,
    y: &[f64],
    z: &TensorCoefficients,
    t: f64,
) -> Result<Vec<f64>> {
    let trace = curvature::metric_trace_of_t(space, set, y, z)?;
    if (trace - 1.0).abs() > 1e-10 {
        return Err(Error::OffSlice { trace });
    }
    let rest = set.complement(space.num_summands());
    let pole: f64 = rest.iter().map(|i| space.dim(i) * z[i]).sum();
    let phi = if rest.is_empty() {
        1.0
    } else if t > pole && t.is_finite() {
        t / (t - pole)
    } else {
        return Err(Error::BelowPole { t, pole });
    };
    let mut x = vec![t; space.num_summands()];
    for (i, &v) in set.iter().zip(y) {
        x[i] = phi * v;
    }
    Ok(x)
}

/// `sum_e c_e exp(<e, w>)`.
#[derive(Clone, Debug)]
struct Monomial {
    coeff: f64,
    exponents: Vec<f64>,
}

/// The slice functional and the trace as sums of monomials in the log
/// slice coordinates.
#[derive(Clone, Debug)]
struct SliceProblem {
    set: IndexSet,
    n: usize,
    functional: Vec<Monomial>,
    trace: Vec<Monomial>,
}

struct Evaluation {
    value: f64,
    /// Gradient and Hessian in the free coordinates (all but the last).
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

enum LocalOutcome {
    Maximum { w: Vec<f64>, value: f64, grad_norm: f64 },
    Escaped { w: Vec<f64>, value: f64 },
    Stalled,
}

impl SliceProblem {
    fn new(space: &HomogeneousSpace, set: IndexSet, z: &[f64]) -> Self {
        let n = set.len();
        let pos = |i: usize| set.rank_of(i).expect("member of set");
        let mut functional: Vec<Monomial> = Vec::new();
        let mut push = |coeff: f64, exponents: Vec<f64>| {
            if coeff == 0.0 {
                return;
            }
            match functional.iter_mut().find(|m| m.exponents == exponents) {
                Some(m) => m.coeff += coeff,
                None => functional.push(Monomial { coeff, exponents }),
            }
        };
        for i in set.iter() {
            let mut e = vec![0.0; n];
            e[pos(i)] = -1.0;
            push(0.5 * space.dim(i) * space.killing()[i], e);
        }
        for t in space.constants().ordered() {
            if !set.contains(t.i) {
                continue;
            }
            match (set.contains(t.j), set.contains(t.k)) {
                (true, true) => {
                    let mut e = vec![0.0; n];
                    e[pos(t.i)] -= 1.0;
                    e[pos(t.j)] -= 1.0;
                    e[pos(t.k)] += 1.0;
                    push(-0.25 * t.value, e);
                }
                (false, false) => {
                    let mut e = vec![0.0; n];
                    e[pos(t.i)] = -1.0;
                    push(-0.5 * t.value, e);
                }
                _ => {}
            }
        }
        let trace = set
            .iter()
            .map(|i| {
                let mut e = vec![0.0; n];
                e[pos(i)] = -1.0;
                Monomial {
                    coeff: space.dim(i) * z[i],
                    exponents: e,
                }
            })
            .collect();
        SliceProblem {
            set,
            n,
            functional,
            trace,
        }
    }

    /// Value, gradient and Hessian of a monomial sum in all `n` coordinates.
    fn sum_derivatives(terms: &[Monomial], w: &[f64]) -> (f64, DVector<f64>, DMatrix<f64>) {
        let n = w.len();
        let mut value = 0.0;
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        for m in terms {
            let arg: f64 = m.exponents.iter().zip(w).map(|(e, w)| e * w).sum();
            let term = m.coeff * arg.exp();
            value += term;
            for a in 0..n {
                let ea = m.exponents[a];
                if ea == 0.0 {
                    continue;
                }
                grad[a] += ea * term;
                for b in 0..n {
                    hess[(a, b)] += ea * m.exponents[b] * term;
                }
            }
        }
        (value, grad, hess)
    }

    /// `free` holds the first `n - 1` log-coordinates; the last is 0.
    fn full_coordinates(&self, free: &[f64]) -> Vec<f64> {
        let mut w = free.to_vec();
        w.push(0.0);
        w
    }

    fn evaluate(&self, free: &[f64]) -> Option<Evaluation> {
        let w = self.full_coordinates(free);
        let (p, gp, hp) = Self::sum_derivatives(&self.functional, &w);
        let (q, gq, hq) = Self::sum_derivatives(&self.trace, &w);
        let value = p / q;
        let grad = (&gp * q - &gq * p) / (q * q);
        let hess = &hp / q
            - (&gp * gq.transpose() + &gq * gp.transpose()) / (q * q)
            - &hq * (p / (q * q))
            + &gq * gq.transpose() * (2.0 * p / (q * q * q));
        let m = self.n - 1;
        let grad = grad.rows(0, m).into_owned();
        let hess = hess.view((0, 0), (m, m)).into_owned();
        let finite = value.is_finite() && grad.iter().chain(hess.iter()).all(|v| v.is_finite());
        finite.then_some(Evaluation { value, grad, hess })
    }

    /// Slice point for log-coordinates `w` (all `n`).
    fn slice_point(&self, w: &[f64]) -> Vec<f64> {
        let u: Vec<f64> = w.iter().map(|w| w.exp()).collect();
        let trace: f64 = self
            .trace
            .iter()
            .zip(&u)
            .map(|(m, u)| m.coeff / u)
            .sum();
        u.iter().map(|u| u * trace).collect()
    }

    fn trace_at(&self, y: &[f64]) -> f64 {
        self.trace.iter().zip(y).map(|(m, y)| m.coeff / y).sum()
    }

    /// Ascent direction from the eigen-decomposition of the Hessian with
    /// eigenvalues replaced by their magnitudes, and the length of the pure
    /// Newton step when the Hessian is negative definite.
    fn direction(eval: &Evaluation) -> (DVector<f64>, Option<f64>) {
        let m = eval.grad.len();
        let eig = SymmetricEigen::new(eval.hess.clone());
        let scale = eig.eigenvalues.iter().fold(0.0_f64, |a, l| a.max(l.abs()));
        let floor = (1e-10 * scale).max(1e-300);
        let mut d = DVector::zeros(m);
        for k in 0..m {
            let v = eig.eigenvectors.column(k);
            let coef = v.dot(&eval.grad) / eig.eigenvalues[k].abs().max(floor);
            d += v * coef;
        }
        let negative_definite = eig.eigenvalues.iter().all(|&l| l < 0.0);
        let newton = negative_definite.then(|| d.norm());
        (d, newton)
    }

    fn local_ascent(&self, start: Vec<f64>, max_iterations: usize) -> (LocalOutcome, usize) {
        let escape_spread = ESCAPE_RATIO.ln();
        let mut free = start;
        let Some(mut eval) = self.evaluate(&free) else {
            return (LocalOutcome::Stalled, 0);
        };
        for it in 0..max_iterations {
            let grad_norm = eval.grad.norm();
            let (mut d, newton) = Self::direction(&eval);
            let settled = newton.is_some_and(|step| step < NEWTON_STEP_TOLERANCE);
            if grad_norm <= POLISH_TOLERANCE || (grad_norm < GRADIENT_TOLERANCE && settled) {
                return self.finish(free, eval.value, grad_norm, newton, it);
            }
            let norm = d.amax();
            if norm > MAX_STEP {
                d *= MAX_STEP / norm;
            }
            let slope = eval.grad.dot(&d);
            let mut alpha = 1.0;
            let accepted = loop {
                let trial: Vec<f64> = free.iter().zip(d.iter()).map(|(w, d)| w + alpha * d).collect();
                if let Some(next) = self.evaluate(&trial) {
                    let armijo = next.value >= eval.value + 1e-4 * alpha * slope;
                    let polishing = next.value >= eval.value - 1e-14 * eval.value.abs().max(1.0)
                        && next.grad.norm() < grad_norm;
                    if armijo || polishing {
                        break Some((trial, next));
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-12 {
                    break None;
                }
            };
            let Some((trial, next)) = accepted else {
                if grad_norm < GRADIENT_TOLERANCE {
                    return self.finish(free, eval.value, grad_norm, newton, it);
                }
                return (LocalOutcome::Stalled, it);
            };
            free = trial;
            eval = next;
            let w = self.full_coordinates(&free);
            let (lo, hi) = w
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            if hi - lo > escape_spread {
                return (
                    LocalOutcome::Escaped {
                        w,
                        value: eval.value,
                    },
                    it + 1,
                );
            }
        }
        (LocalOutcome::Stalled, max_iterations)
    }

    fn finish(
        &self,
        free: Vec<f64>,
        value: f64,
        grad_norm: f64,
        newton: Option<f64>,
        iterations: usize,
    ) -> (LocalOutcome, usize) {
        // A stationary point whose Hessian has a positive direction is a
        // saddle, not a maximum.
        let w = self.full_coordinates(&free);
        let outcome = match newton {
            Some(_) => LocalOutcome::Maximum { w, value, grad_norm },
            None if self.is_flat_or_concave(&free) => LocalOutcome::Maximum { w, value, grad_norm },
            None => LocalOutcome::Stalled,
        };
        (outcome, iterations)
    }

    fn is_flat_or_concave(&self, free: &[f64]) -> bool {
        let Some(eval) = self.evaluate(free) else {
            return false;
        };
        if eval.hess.is_empty() {
            return true;
        }
        let eig = SymmetricEigen::new(eval.hess);
        let scale = eig.eigenvalues.iter().fold(1.0_f64, |a, l| a.max(l.abs()));
        eig.eigenvalues.iter().all(|&l| l <= 1e-10 * scale)
    }

    fn starts(&self, options: &SolverOptions) -> Vec<Vec<f64>> {
        let dim = self.n - 1;
        let skip = options.seed.wrapping_mul(options.restarts as u64);
        (0..options.restarts as u64)
            .map(|r| {
                (0..dim)
                    .map(|a| {
                        let h = halton(skip.wrapping_add(r + 1), PRIMES[a % PRIMES.len()]);
                        -START_RANGE + 2.0 * START_RANGE * h
                    })
                    .collect()
            })
            .collect()
    }

    fn maximize(&self, options: &SolverOptions) -> Result<OptimizationReport> {
        if self.n == 1 {
            // the slice is a single point
            let eval = self.evaluate(&[]).ok_or(Error::Overflow("slice functional"))?;
            let y = self.slice_point(&[0.0]);
            return Ok(OptimizationReport {
                set: self.set,
                constraint_residual: (self.trace_at(&y) - 1.0).abs(),
                stationary_points: vec![StationaryPoint {
                    point: y.clone(),
                    value: eval.value,
                }],
                argmax: y,
                value: eval.value,
                iterations: 0,
                restarts_used: 0,
                converged: true,
                first_order_residual: 0.0,
                escape: None,
            });
        }

        let mut iterations = 0;
        let mut maxima: Vec<(Vec<f64>, f64, f64)> = Vec::new();
        let mut escaped: Option<(Vec<f64>, f64)> = None;
        let mut stalled = 0;
        let starts = self.starts(options);
        let restarts_used = starts.len();
        for start in starts {
            let (outcome, its) = self.local_ascent(start, options.max_iterations);
            iterations += its;
            match outcome {
                LocalOutcome::Maximum { w, value, grad_norm } => maxima.push((w, value, grad_norm)),
                LocalOutcome::Escaped { w, value } => {
                    if escaped.as_ref().is_none_or(|(_, best)| value > *best) {
                        escaped = Some((w, value));
                    }
                }
                LocalOutcome::Stalled => stalled += 1,
            }
        }

        let escape = escaped.as_ref().map(|(w, value)| {
            let hi = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
            let spread = hi - lo;
            // members within half the spread of the top are the ones running off
            let growing = IndexSet::from_indices(
                self.set
                    .iter()
                    .zip(w)
                    .filter(|&(_, &v)| v > hi - 0.5 * spread)
                    .map(|(i, _)| i),
            );
            EscapeEvidence {
                growing,
                ratio: spread.exp(),
                value: *value,
            }
        });

        // best value first; ties broken lexicographically on the point
        maxima.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| cmp_points(&a.0, &b.0)));
        if let Some((best_w, best_value, best_grad)) = maxima.first().cloned() {
            let window = VALUE_WINDOW * best_value.abs().max(1.0);
            let mut distinct: Vec<(Vec<f64>, f64)> = Vec::new();
            for (w, value, _) in &maxima {
                if best_value - value > window {
                    break;
                }
                let close = distinct.iter().any(|(u, _)| {
                    let (lu, lw) = (u.iter().sum::<f64>() / u.len() as f64, w.iter().sum::<f64>() / w.len() as f64);
                    u.iter().zip(w).all(|(a, b)| ((a - lu) - (b - lw)).abs() < 1e-6)
                });
                if !close {
                    distinct.push((w.clone(), *value));
                }
            }
            let argmax = self.slice_point(&best_w);
            return Ok(OptimizationReport {
                set: self.set,
                constraint_residual: (self.trace_at(&argmax) - 1.0).abs(),
                value: best_value,
                iterations,
                restarts_used,
                converged: true,
                first_order_residual: best_grad,
                escape,
                stationary_points: distinct
                    .into_iter()
                    .map(|(w, value)| StationaryPoint {
                        point: self.slice_point(&w),
                        value,
                    })
                    .collect(),
                argmax,
            });
        }

        match escaped {
            Some((w, value)) => {
                let argmax = self.slice_point(&w);
                Ok(OptimizationReport {
                    set: self.set,
                    constraint_residual: (self.trace_at(&argmax) - 1.0).abs(),
                    value,
                    iterations,
                    restarts_used,
                    converged: false,
                    first_order_residual: f64::NAN,
                    escape,
                    stationary_points: Vec::new(),
                    argmax,
                })
            }
            None => Err(Error::Optimizer {
                set: self.set,
                message: format!(
                    "all {restarts_used} restarts stalled ({stalled} hit the line-search or iteration budget)"
                ),
            }),
        }
    }
}

fn cmp_points(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131,
];

/// Radical inverse of `index` in `base`.
fn halton(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut f = 1.0 / base as f64;
    while index > 0 {
        result += f * (index % base) as f64;
        index /= base;
        f /= base as f64;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_space;

    fn tensor(v: &[f64]) -> TensorCoefficients {
        TensorCoefficients::new(v.to_vec()).unwrap()
    }

    #[test]
    fn halton_sequence() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(2, 3) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_summand_slice_is_a_point() {
        let space = HomogeneousSpace::new("one", vec![4], vec![1.0], &[]).unwrap();
        let report = maximize_s_on_mt(&space, &tensor(&[1.0]), &SolverOptions::default()).unwrap();
        assert!(report.converged);
        assert!((report.argmax[0] - 4.0).abs() < 1e-15);
        assert!((report.value - 0.5).abs() < 1e-15);

        let x = MetricCoefficients::new(vec![4.0]).unwrap();
        let v = verify_prescribed_ricci(&space, &x, &tensor(&[1.0])).unwrap();
        assert!((v.c - 0.5).abs() < 1e-15);
        assert_eq!(v.residual, 0.0);
        assert!(v.positive && v.verified);
    }

    #[test]
    fn f4_interior_maximum() {
        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let j = IndexSet::from_one_based([2, 4]).unwrap();
        let report =
            maximize_hat_s_on_slice(&f4, j, &tensor(&[1.0; 4]), &SolverOptions::default()).unwrap();
        assert!(report.converged);
        let v0 = 6.0 * 19f64.sqrt();
        assert!((report.argmax[1] - v0).abs() < 1e-8 * v0, "{:?}", report.argmax);
        let psi = 7.0 / 18.0 - (19f64.sqrt() - 1.0) / 54.0;
        assert!((report.value - psi).abs() < 1e-12);
        assert!(report.first_order_residual < GRADIENT_TOLERANCE);
        assert!(report.constraint_residual < 1e-10);
    }

    #[test]
    fn f4_unattained_supremum_escapes() {
        let f4 = builtin_space("F4_SU3xSU2xU1").unwrap();
        let j = IndexSet::from_one_based([2, 4]).unwrap();
        let report = maximize_hat_s_on_slice(&f4, j, &tensor(&[1.0, 2.0, 1.0, 1.0]), &SolverOptions::default())
            .unwrap();
        assert!(!report.converged);
        let escape = report.escape.expect("escape evidence");
        // u -> infinity while v -> 6 z_4
        assert_eq!(escape.growing, IndexSet::singleton(1));
        assert!(escape.value < 2.0 / 9.0 && escape.value > 2.0 / 9.0 - 1e-6);
    }

    #[test]
    fn toy_without_constants() {
        let toy = HomogeneousSpace::new("toy", vec![2, 2], vec![1.0, 1.0], &[]).unwrap();
        // with z = (1, 1) the functional is constant 1/2 on the slice
        let report = maximize_s_on_mt(&toy, &tensor(&[1.0, 1.0]), &SolverOptions::default()).unwrap();
        assert!(report.converged);
        assert!((report.value - 0.5).abs() < 1e-15);

        // with z = (1, 2) the supremum 1/2 is only approached as y_2 -> infinity
        let report = maximize_s_on_mt(&toy, &tensor(&[1.0, 2.0]), &SolverOptions::default()).unwrap();
        assert!(!report.converged);
        let escape = report.escape.unwrap();
        assert_eq!(escape.growing, IndexSet::singleton(1));
        assert!(escape.ratio > ESCAPE_RATIO);
        assert!(escape.value < 0.5 && escape.value > 0.5 - 1e-6);
    }

    #[test]
    fn g2_unit_metric_is_not_a_solution() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        let x = MetricCoefficients::new(vec![1.0; 3]).unwrap();
        let v = verify_prescribed_ricci(&g2, &x, &tensor(&[1.0; 3])).unwrap();
        // R = (17/48, 7/24, 7/16), c = 3/8
        assert!((v.c - 0.375).abs() < 1e-15);
        assert!((v.residual - 1.0 / 12.0).abs() < 1e-15);
        assert!(!v.verified);
    }

    #[test]
    fn solves_g2_and_e6() {
        for name in ["G2_U2_long", "E6_Sp3xSp1"] {
            let space = builtin_space(name).unwrap();
            let z = tensor(&[1.0; 3]);
            let report = maximize_s_on_mt(&space, &z, &SolverOptions::default()).unwrap();
            assert!(report.converged, "{name}");
            assert!(report.first_order_residual < GRADIENT_TOLERANCE);
            let x = MetricCoefficients::new(report.argmax.clone()).unwrap();
            let v = verify_prescribed_ricci(&space, &x, &z).unwrap();
            assert!(v.verified, "{name}: {v:?}");
            // c equals S at a point of M_T solving Ric = cT
            assert!((v.c - report.value).abs() < 1e-9 * report.value.abs());
        }
    }

    #[test]
    fn escape_curve_edge_cases() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        let z = tensor(&[1.0; 3]);
        let j = IndexSet::singleton(2);
        assert!(matches!(
            escape_curve_s(&g2, j, &[4.0], &z, 6.0),
            Err(Error::BelowPole { .. })
        ));
        assert!(matches!(
            escape_curve_s(&g2, j, &[5.0], &z, 100.0),
            Err(Error::OffSlice { .. })
        ));
        let y = [10.0, 10.0, 10.0];
        let a = escape_curve_s(&g2, g2.full_set(), &y, &z, 1.0).unwrap();
        let b = escape_curve_s(&g2, g2.full_set(), &y, &z, 1e6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn escape_curve_limit_g2() {
        let g2 = builtin_space("G2_U2_long").unwrap();
        let z = tensor(&[1.0; 3]);
        let j = IndexSet::singleton(2);
        let s = escape_curve_s(&g2, j, &[4.0], &z, 1e6).unwrap();
        assert!((s - 0.375).abs() < 1e-5, "{s}");
    }
}
