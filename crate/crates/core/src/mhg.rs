//! Truncated hypergeometric functions of one or two diagonal matrix
//! arguments,
//!
//! ```text
//! pFq(a; b; X, Y) = Σ_k Σ_{κ⊢k, l(κ)≤n} [Π (a_i)_κ / Π (b_j)_κ] · C_κ(X) C_κ(Y) / (k! C_κ(I))
//! ```
//!
//! with the one-argument form taking `Y = I`. Coefficients are built along
//! the partition lattice (κ from κ minus its last cell) and combined with
//! Jack tables from a shared [`JackPlan`], so a [`HypergeometricSeries`]
//! can be evaluated at many arguments for the price of the Jack tables.

use std::sync::Arc;

use crate::combinatorics::{pochhammer_cell, BetaParam};
use crate::error::{Error, Result};
use crate::jack::{jack_c_identity_ratio, JackPlan};
use crate::scalar::{CompensatedSum, Real};
use crate::spectrum::DiagSpectrum;

/// Truncation policy for a series evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesControl<T> {
    /// Hard cap on the partition weight |κ|.
    pub max_weight: usize,
    /// Convergence is declared after three consecutive weight slices each
    /// below `rel_tol` relative to the running sum.
    pub rel_tol: T,
    /// Restricts the summation domain to κ₁ ≤ `max_part`.
    pub max_part: Option<usize>,
}

impl<T: Real> Default for SeriesControl<T> {
    fn default() -> Self {
        Self {
            max_weight: 30,
            rel_tol: T::lit(1e-12),
            max_part: None,
        }
    }
}

impl<T: Real> SeriesControl<T> {
    pub fn new(max_weight: usize, rel_tol: T) -> Result<Self> {
        if !(rel_tol > T::zero()) {
            return Err(Error::Parameter("rel_tol must be positive".into()));
        }
        Ok(Self {
            max_weight,
            rel_tol,
            max_part: None,
        })
    }

    pub fn with_max_part(mut self, max_part: usize) -> Self {
        self.max_part = Some(max_part);
        self
    }
}

/// Value and convergence diagnostics of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult<T> {
    pub value: T,
    pub weight_reached: usize,
    pub converged: bool,
    /// Magnitude of the last summed weight slice relative to the sum; zero
    /// when the (restricted) summation domain was exhausted.
    pub tail_estimate: T,
}

impl<T: Real> SeriesResult<T> {
    /// Converts a non-converged result into [`Error::NotConverged`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                weight: self.weight_reached,
                tail: self.tail_estimate.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

/// Returns `t` when `a = -t` for a nonnegative integer `t`.
pub(crate) fn nonpositive_integer<T: Real>(a: T) -> Option<usize> {
    let r = a.round();
    if r <= T::zero() && (a - r).abs() <= T::lit(1e-12) * T::one().max(a.abs()) {
        (-r).to_usize()
    } else {
        None
    }
}

fn snap_nonpositive_integer<T: Real>(a: T) -> T {
    match nonpositive_integer(a) {
        Some(t) => -T::from_usize_lossy(t),
        None => a,
    }
}

/// A `pFq^{(β)}` series with fixed parameters and dimension, reusable across
/// arguments.
#[derive(Clone, Debug)]
pub struct HypergeometricSeries<T> {
    plan: Arc<JackPlan<T>>,
    coef: Vec<T>,
    identity: Vec<T>,
    rel_tol: T,
    exhaustive: bool,
}

impl<T: Real> HypergeometricSeries<T> {
    pub fn new(upper: &[T], lower: &[T], beta: &BetaParam<T>, n: usize, ctl: &SeriesControl<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("matrix dimension must be at least 1".into()));
        }
        if !(ctl.rel_tol > T::zero()) {
            return Err(Error::Parameter("rel_tol must be positive".into()));
        }
        // Snap numerator parameters that are nonpositive integers so the
        // vanishing Pochhammer factor is exactly zero.
        let upper: Vec<T> = upper.iter().map(|&a| snap_nonpositive_integer(a)).collect();
        let trunc = upper.iter().filter_map(|&a| nonpositive_integer(a)).min();
        let part_cap = match (trunc, ctl.max_part) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let (limit, exhaustive) = match part_cap {
            Some(cap) => (ctl.max_weight.min(n * cap), n * cap <= ctl.max_weight),
            None => (ctl.max_weight, false),
        };
        let plan = Arc::new(JackPlan::new(beta, n, limit, part_cap));
        let mut series = Self::from_plan(&upper, lower, plan, ctl.rel_tol)?;
        series.exhaustive = exhaustive;
        Ok(series)
    }

    /// Series summed over every partition of an existing plan, which lets
    /// several parameter sets share one set of Jack tables (see
    /// [`Self::eval_table`]). Never reports an exhausted domain.
    pub fn from_plan(upper: &[T], lower: &[T], plan: Arc<JackPlan<T>>, rel_tol: T) -> Result<Self> {
        if !(rel_tol > T::zero()) {
            return Err(Error::Parameter("rel_tol must be positive".into()));
        }
        let upper: Vec<T> = upper.iter().map(|&a| snap_nonpositive_integer(a)).collect();
        let beta = plan.beta().clone();
        let beta = &beta;
        let n = plan.n();
        let mut coef = Vec::with_capacity(plan.partitions().len());
        let mut identity = Vec::with_capacity(plan.partitions().len());
        for kappa in plan.partitions() {
            let Some((parent, row)) = kappa.without_last_cell() else {
                coef.push(T::one());
                identity.push(T::one());
                continue;
            };
            let col = kappa.part(row) - 1;
            let p = plan.index_of(&parent).expect("plan is down-closed");
            identity.push(identity[p] * jack_c_identity_ratio(kappa, beta, n));
            let prev = coef[p];
            let num: T = upper.iter().map(|a| pochhammer_cell(a, beta, row, col)).product();
            if prev == T::zero() || num == T::zero() {
                coef.push(T::zero());
                continue;
            }
            let den: T = lower.iter().map(|b| pochhammer_cell(b, beta, row, col)).product();
            if den == T::zero() {
                return Err(Error::Parameter(format!(
                    "a lower parameter has a vanishing Pochhammer symbol at κ = {kappa}"
                )));
            }
            coef.push(prev * num / (den * T::from_usize_lossy(kappa.weight())));
        }
        Ok(Self {
            plan,
            coef,
            identity,
            rel_tol,
            exhaustive: false,
        })
    }

    pub fn n(&self) -> usize {
        self.plan.n()
    }

    /// Largest weight this series will sum.
    pub fn weight_limit(&self) -> usize {
        self.plan.max_weight()
    }

    /// True when the summation domain is finite and fully covered.
    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    /// Series coefficient `Π(a)_κ / Π(b)_κ / |κ|!` aligned with the plan.
    pub fn coefficients(&self) -> &[T] {
        &self.coef
    }

    pub fn plan(&self) -> &Arc<JackPlan<T>> {
        &self.plan
    }

    /// Evaluates at `X` (and `Y`, when given).
    pub fn eval(&self, x: &DiagSpectrum<T>, y: Option<&DiagSpectrum<T>>) -> Result<SeriesResult<T>> {
        let n = self.n();
        if x.len() != n || y.is_some_and(|y| y.len() != n) {
            return Err(Error::Precondition(format!("arguments must have length {n}")));
        }
        let cx = self.jack_table(x);
        let cy = y.map(|y| self.jack_table(y));
        let term = |i: usize| {
            let t = self.coef[i] * cx[i];
            match &cy {
                Some(cy) => t * cy[i] / self.identity[i],
                None => t,
            }
        };
        Ok(self.accumulate(term))
    }

    /// One-argument evaluation at several spectra with a single sweep over
    /// the Jack plan.
    pub fn eval_many(&self, xs: &[&DiagSpectrum<T>]) -> Result<Vec<SeriesResult<T>>> {
        let n = self.n();
        if xs.iter().any(|x| x.len() != n) {
            return Err(Error::Precondition(format!("arguments must have length {n}")));
        }
        let general: Vec<&[T]> = xs.iter().filter(|x| !x.is_scalar()).map(|x| x.values()).collect();
        let mut tables = self.plan.evaluate_many(&general).into_iter();
        Ok(xs
            .iter()
            .map(|x| {
                let cx = if x.is_scalar() {
                    self.scalar_table(x[0])
                } else {
                    tables.next().expect("one table per general argument")
                };
                self.eval_table(&cx)
            })
            .collect())
    }

    /// `C_κ(X)` over the plan; `C_κ(cI) = c^|κ| C_κ(I)` short-circuits the
    /// Jack recursion for scalar arguments.
    fn jack_table(&self, x: &DiagSpectrum<T>) -> Vec<T> {
        if x.is_scalar() {
            self.scalar_table(x[0])
        } else {
            self.plan.evaluate(x.values())
        }
    }

    fn scalar_table(&self, c: T) -> Vec<T> {
        let mut out = Vec::with_capacity(self.identity.len());
        let mut power = T::one();
        for k in 0..=self.weight_limit() {
            out.extend(self.plan.weight_range(k).map(|i| self.identity[i] * power));
            power *= c;
        }
        out
    }

    /// One-argument value from a Jack table `C_κ(X)` aligned with
    /// [`Self::plan`], as returned by [`JackPlan::evaluate`].
    ///
    /// # Panics
    /// If the table length differs from the plan size.
    pub fn eval_table(&self, cx: &[T]) -> SeriesResult<T> {
        assert_eq!(cx.len(), self.coef.len(), "Jack table does not match the plan");
        self.accumulate(|i| self.coef[i] * cx[i])
    }

    fn accumulate(&self, term: impl Fn(usize) -> T) -> SeriesResult<T> {
        let mut total = CompensatedSum::new();
        let mut small_run = 0;
        let mut tail = T::infinity();
        let mut reached = 0;
        let mut converged = false;
        for k in 0..=self.weight_limit() {
            let mut slice = CompensatedSum::new();
            for i in self.plan.weight_range(k) {
                let t = term(i);
                slice.add(t);
                total.add(t);
            }
            reached = k;
            if k == 0 {
                continue;
            }
            let (s, tot) = (slice.value().abs(), total.value().abs());
            tail = if s == T::zero() { T::zero() } else { s / tot };
            if tail < self.rel_tol {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= 3 && !self.exhaustive {
                converged = true;
                break;
            }
        }
        if self.exhaustive {
            converged = true;
            tail = T::zero();
        }
        SeriesResult {
            value: total.value(),
            weight_reached: reached,
            converged,
            tail_estimate: tail,
        }
    }
}

/// `pFq^{(β)}(a; b; X)` or, with `y`, `pFq^{(β)}(a; b; X, Y)`.
pub fn hyper_pq<T: Real>(
    a: &[T],
    b: &[T],
    beta: &BetaParam<T>,
    x: &DiagSpectrum<T>,
    y: Option<&DiagSpectrum<T>>,
    ctl: &SeriesControl<T>,
) -> Result<SeriesResult<T>> {
    HypergeometricSeries::new(a, b, beta, x.len(), ctl)?.eval(x, y)
}

/// Closed form `₁F₀(a;;X) = |I - X|^{-a}` for `X < I`.
pub fn f10_closed<T: Real>(a: T, x: &DiagSpectrum<T>) -> Result<T> {
    if let Some(v) = x.iter().find(|&&v| v >= T::one()) {
        return Err(Error::Domain(format!("1F0 closed form needs X < I, found entry {v}")));
    }
    let ln_det: T = x.iter().map(|&v| (T::one() - v).ln()).sum();
    Ok((-a * ln_det).exp())
}

fn det_one_minus<T: Real>(x: &DiagSpectrum<T>) -> Result<T> {
    if let Some(v) = x.iter().find(|&&v| v >= T::one()) {
        return Err(Error::Domain(format!("Euler transformation needs X < I, found entry {v}")));
    }
    Ok(x.iter().map(|&v| T::one() - v).product())
}

/// Both sides of `₂F₁(a,b;c;X) = ₂F₁(c-a,b;c;-X(I-X)^{-1}) |I-X|^{-b}`,
/// each summed independently.
pub fn f21_transform_check<T: Real>(
    a: T,
    b: T,
    c: T,
    beta: &BetaParam<T>,
    x: &DiagSpectrum<T>,
    ctl: &SeriesControl<T>,
) -> Result<(T, T)> {
    let det = det_one_minus(x)?;
    let lhs = hyper_pq(&[a, b], &[c], beta, x, None, ctl)?.require_converged()?;
    let moved = x.map(|v| -v / (T::one() - v))?;
    let rhs = hyper_pq(&[c - a, b], &[c], beta, &moved, None, ctl)?.require_converged()?;
    Ok((lhs.value, rhs.value * det.powf(-b)))
}

/// Both sides of `₂F₁(a,b;c;X) = ₂F₁(c-a,c-b;c;X) |I-X|^{c-a-b}`.
pub fn f21_euler_check<T: Real>(
    a: T,
    b: T,
    c: T,
    beta: &BetaParam<T>,
    x: &DiagSpectrum<T>,
    ctl: &SeriesControl<T>,
) -> Result<(T, T)> {
    let det = det_one_minus(x)?;
    let lhs = hyper_pq(&[a, b], &[c], beta, x, None, ctl)?.require_converged()?;
    let rhs = hyper_pq(&[c - a, c - b], &[c], beta, x, None, ctl)?.require_converged()?;
    Ok((lhs.value, rhs.value * det.powf(c - a - b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> DiagSpectrum<f64> {
        DiagSpectrum::new(v.to_vec()).unwrap()
    }

    fn beta(b: f64) -> BetaParam<f64> {
        BetaParam::new(b).unwrap()
    }

    #[test]
    fn eval_many_agrees_with_eval() {
        let ctl = SeriesControl::new(25, 1e-13).unwrap();
        let s = HypergeometricSeries::new(&[1.5], &[2.5], &beta(0.8), 3, &ctl).unwrap();
        let (x, y) = (spec(&[0.4, -0.2, 0.1]), spec(&[0.05, 0.3, 0.3]));
        let many = s.eval_many(&[&x, &y]).unwrap();
        assert_eq!(many[0], s.eval(&x, None).unwrap());
        assert_eq!(many[1], s.eval(&y, None).unwrap());
    }

    #[test]
    fn scalar_argument_matches_recursion() {
        let ctl = SeriesControl::new(30, 1e-15).unwrap();
        let s = HypergeometricSeries::new(&[1.5, 0.7], &[2.2], &beta(2.5), 3, &ctl).unwrap();
        let x = DiagSpectrum::constant(3, -0.45);
        let fast = s.eval(&x, None).unwrap().value;
        let slow = s.eval_table(&s.plan().evaluate(x.values())).value;
        assert!((fast - slow).abs() <= 1e-13 * slow.abs(), "{fast} vs {slow}");
        assert_eq!(s.eval_many(&[&x]).unwrap()[0].value, fast);
    }

    #[test]
    fn f00_is_exponential_of_trace() {
        let r = hyper_pq(&[], &[], &beta(1.7), &spec(&[0.3, 0.2]), None, &SeriesControl::default()).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.5f64.exp()).abs() < 1e-13);
        assert!(r.tail_estimate < 1e-12);
        assert!(r.weight_reached <= 30);
    }

    #[test]
    fn f10_scalar_example() {
        let r = hyper_pq(&[2.0], &[], &beta(2.0), &spec(&[0.5]), None, &SeriesControl::new(200, 1e-14).unwrap()).unwrap();
        assert!(r.converged);
        assert!((r.value - 4.0).abs() < 1e-11);
        assert_eq!(f10_closed(2.0, &spec(&[0.5])).unwrap(), 4.0);
    }

    #[test]
    fn f10_closed_examples() {
        assert_eq!(f10_closed(0.0, &spec(&[0.3, -2.0])).unwrap(), 1.0);
        let v = f10_closed(3.0, &spec(&[-1.5, 0.2])).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
        assert!(matches!(f10_closed(1.0, &spec(&[0.2, 1.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn truncating_numerator_gives_exact_polynomial() {
        // Spectral radius far outside the convergence disc still works.
        let x = spec(&[3.0, -7.5, 12.0]);
        let r = hyper_pq(&[-2.0, 1.3], &[2.2], &beta(1.5), &x, None, &SeriesControl::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.tail_estimate, 0.0);
        assert_eq!(r.weight_reached, 6);
        assert!(r.value.is_finite());
    }

    #[test]
    fn vanishing_lower_parameter_is_reported() {
        let err = hyper_pq(&[1.0], &[-1.0], &beta(2.0), &spec(&[0.1]), None, &SeriesControl::default());
        assert!(matches!(err, Err(Error::Parameter(_))));
        // A truncating numerator that kills the offending terms first is fine.
        let ok = hyper_pq(&[-1.0], &[-3.0], &beta(2.0), &spec(&[0.1]), None, &SeriesControl::default());
        assert!(ok.is_ok());
    }

    #[test]
    fn two_argument_with_identity_matches_one_argument() {
        let b = beta(2.5);
        let x = spec(&[0.31, -0.2, 0.05]);
        let ctl = SeriesControl::default();
        let one = hyper_pq(&[1.5], &[3.1], &b, &x, None, &ctl).unwrap();
        let two = hyper_pq(&[1.5], &[3.1], &b, &x, Some(&DiagSpectrum::identity(3)), &ctl).unwrap();
        assert!((one.value - two.value).abs() <= 1e-12 * one.value.abs());
    }

    #[test]
    fn non_convergence_is_flagged() {
        let ctl = SeriesControl::new(8, 1e-12).unwrap();
        let r = hyper_pq(&[3.0], &[], &beta(1.0), &spec(&[0.9, 0.8]), None, &ctl).unwrap();
        assert!(!r.converged);
        assert!(r.tail_estimate >= 1e-12);
        assert_eq!(r.weight_reached, 8);
        assert!(r.require_converged().is_err());
    }

    #[test]
    fn euler_transform_scalar_example() {
        let ctl = SeriesControl::new(200, 1e-15).unwrap();
        let (l, r) = f21_transform_check(0.5, 1.0, 2.0, &beta(2.0), &spec(&[0.3]), &ctl).unwrap();
        assert!((l - r).abs() < 1e-8 * l.abs());
        let (l, r) = f21_transform_check(0.0, 0.0, 1.7, &beta(1.0), &spec(&[0.3, 0.1]), &ctl).unwrap();
        assert_eq!((l, r), (1.0, 1.0));
    }
}
