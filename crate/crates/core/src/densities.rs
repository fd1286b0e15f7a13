//! Analytic laws of the β-MANOVA generalized singular values: the joint
//! density, its β-Jacobi reduction at `Ω = I`, and the CDF of the largest
//! value in both its `₂F₁` and truncated-polynomial forms.
//!
//! All densities are for ordered values `c₁ > … > cₙ`; the unordered
//! versions differ by a factor `1/n!`.


use num_traits::Zero;

use crate::combinatorics::{gen_pochhammer, log_gen_gamma, log_k_constant, BetaParam};
use crate::jack::JackPlan;
use crate::error::{Error, Result};
use crate::mhg::{hyper_pq, nonpositive_integer, HypergeometricSeries, SeriesControl, SeriesResult};
use crate::sampler::ManovaParams;
use crate::scalar::{DoubleDouble, Real};
use crate::spectrum::DiagSpectrum;

/// Ordered generalized singular values, `1 > c₁ > … > cₙ > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GsvPoint<T> {
    c: DiagSpectrum<T>,
}

impl<T: Real> GsvPoint<T> {
    pub fn new(c: Vec<T>) -> Result<Self> {
        let c = DiagSpectrum::new(c)?;
        if !c.is_strictly_decreasing() || c.max() >= T::one() || c.min() <= T::zero() {
            return Err(Error::Domain("generalized singular values must satisfy 1 > c1 > ... > cn > 0".into()));
        }
        Ok(Self { c })
    }

    pub fn values(&self) -> &DiagSpectrum<T> {
        &self.c
    }
}

/// How the `₁F₀` kernel of the joint density is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KernelRoute {
    /// Closed form `|I - ω²X|^{-a}` when `Ω = ωI`, series otherwise.
    #[default]
    Auto,
    /// Always sum the two-argument series.
    Series,
}

/// Log of the joint density of the ordered generalized singular values.
/// The result carries the diagnostics of the embedded `₁F₀` series.
pub fn joint_gsv_logdensity<T: Real>(
    params: &ManovaParams<T>,
    point: &GsvPoint<T>,
    ctl: &SeriesControl<T>,
) -> Result<SeriesResult<T>> {
    joint_gsv_logdensity_with(params, point, ctl, KernelRoute::Auto)
}

pub fn joint_gsv_logdensity_with<T: Real>(
    params: &ManovaParams<T>,
    point: &GsvPoint<T>,
    ctl: &SeriesControl<T>,
    route: KernelRoute,
) -> Result<SeriesResult<T>> {
    let ManovaParams { m, n, p, beta, omega } = params;
    let (m, n, p) = (*m, *n, *p);
    let c = point.values();
    if c.len() != n {
        return Err(Error::Precondition(format!("point must have {n} values")));
    }
    let b = beta.beta();
    let two = T::lit(2.0);
    let (nf, pf) = (T::from_usize_lossy(n), T::from_usize_lossy(p));

    let mut log_prefactor = nf * two.ln() + log_k_constant(m + p, n, beta)?
        - log_k_constant(m, n, beta)?
        - log_k_constant(p, n, beta)?
        + pf * b * omega.iter().map(|w| w.ln()).sum::<T>();
    let c_exp = (pf - nf + T::one()) * b - T::one();
    let one_minus_exp = -(pf + nf - T::one()) * b / two - T::one();
    for &ci in c.iter() {
        let one_minus = (T::one() - ci) * (T::one() + ci);
        log_prefactor += c_exp * ci.ln() + one_minus_exp * one_minus.ln();
    }
    for i in 0..n {
        for j in i + 1..n {
            log_prefactor += b * (c[i] * c[i] - c[j] * c[j]).abs().ln();
        }
    }

    let a = T::from_usize_lossy(m + p) * b / two;
    let x = c.map(|ci| ci * ci / ((ci - T::one()) * (ci + T::one())))?;
    let kernel = if route == KernelRoute::Auto && omega.is_scalar() {
        let w2 = omega[0] * omega[0];
        let ln_det: T = x.iter().map(|&xi| (T::one() - w2 * xi).ln()).sum();
        SeriesResult {
            value: (-a * ln_det).exp(),
            weight_reached: 0,
            converged: true,
            tail_estimate: T::zero(),
        }
    } else {
        let omega_sq = omega.map(|w| w * w)?;
        hyper_pq(&[a], &[], beta, &x, Some(&omega_sq), ctl)?
    };

    let (value, converged) = if kernel.value > T::zero() {
        (log_prefactor + kernel.value.ln(), kernel.converged)
    } else {
        (T::nan(), false)
    };
    Ok(SeriesResult {
        value,
        converged,
        ..kernel
    })
}

/// Log of the ordered β-Jacobi density of `u₁ > … > uₙ` in `(0, 1)`.
pub fn jacobi_logdensity<T: Real>(m: usize, n: usize, p: usize, beta: &BetaParam<T>, u: &DiagSpectrum<T>) -> Result<T> {
    if n == 0 || m < n || p < n {
        return Err(Error::Precondition(format!("need m, p >= n >= 1, got m={m}, n={n}, p={p}")));
    }
    if u.len() != n || !u.is_strictly_decreasing() || u.max() >= T::one() || u.min() <= T::zero() {
        return Err(Error::Domain("u must be strictly decreasing in (0, 1) with n entries".into()));
    }
    let b = beta.beta();
    let half = b / T::lit(2.0);
    let nf = T::from_usize_lossy(n);
    let u_exp = (T::from_usize_lossy(p) - nf + T::one()) * half - T::one();
    let v_exp = (T::from_usize_lossy(m) - nf + T::one()) * half - T::one();
    let mut acc = log_k_constant(m + p, n, beta)? - log_k_constant(m, n, beta)? - log_k_constant(p, n, beta)?;
    for &ui in u.iter() {
        acc += u_exp * ui.ln() + v_exp * (T::one() - ui).ln();
    }
    for i in 0..n {
        for j in i + 1..n {
            acc += b * (u[i] - u[j]).abs().ln();
        }
    }
    Ok(acc)
}

fn check_unit_open<T: Real>(x: T) -> Result<()> {
    if x > T::zero() && x < T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must lie in (0, 1), got {x}")))
    }
}

/// `(1 - x²)·((1 - x²)I + x²Ω²)^{-1}` and its complement `x²Ω²(...)^{-1}`,
/// each entry formed without subtracting from one.
fn cdf_arguments<T: Real>(omega: &DiagSpectrum<T>, x: T) -> Result<(DiagSpectrum<T>, DiagSpectrum<T>)> {
    let one_minus = (T::one() - x) * (T::one() + x);
    let x2 = x * x;
    let rest = omega.map(|w| one_minus / (one_minus + x2 * w * w))?;
    let z = omega.map(|w| x2 * w * w / (one_minus + x2 * w * w))?;
    Ok((rest, z))
}

fn clamp_probability<T: Real>(v: T) -> Result<T> {
    let slack = T::lit(1e-10);
    if v >= T::zero() && v <= T::one() {
        Ok(v)
    } else if v > -slack && v < T::one() + slack {
        Ok(v.max(T::zero()).min(T::one()))
    } else {
        Err(Error::Accumulation {
            value: v.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// `P(c₁ < x)` as an exact finite sum over κ with `κ₁ ≤ t`, valid when
/// `t = (m - n + 1)β/2 - 1` is a nonnegative integer. The Jack plan and
/// Pochhammer coefficients are built once and reused for every `x`.
#[derive(Clone, Debug)]
pub struct LargestGsvCdf<T> {
    params: ManovaParams<T>,
    t: usize,
    series: HypergeometricSeries<T>,
}

impl<T: Real> LargestGsvCdf<T> {
    pub fn new(params: &ManovaParams<T>) -> Result<Self> {
        let t = params.truncation_order().ok_or_else(|| {
            let t = T::from_usize_lossy(params.m - params.n + 1) * params.beta.half_beta() - T::one();
            Error::Parameter(format!(
                "largest-value CDF needs t = (m-n+1)β/2 - 1 to be a nonnegative integer; here t = {t}"
            ))
        })?;
        let ctl = SeriesControl {
            max_weight: params.n * t,
            rel_tol: T::lit(1e-12),
            max_part: Some(t),
        };
        let a = T::from_usize_lossy(params.p) * params.beta.half_beta();
        let series = HypergeometricSeries::new(&[a], &[], &params.beta, params.n, &ctl)?;
        debug_assert!(series.is_exhaustive());
        Ok(Self {
            params: params.clone(),
            t,
            series,
        })
    }

    pub fn truncation_order(&self) -> usize {
        self.t
    }

    pub fn params(&self) -> &ManovaParams<T> {
        &self.params
    }

    pub fn eval(&self, x: T) -> Result<T> {
        check_unit_open(x)?;
        let (rest, z) = cdf_arguments(&self.params.omega, x)?;
        let ln_det: T = z.iter().map(|v| v.ln()).sum();
        let a = T::from_usize_lossy(self.params.p) * self.params.beta.half_beta();
        let sum = self.series.eval(&rest, None)?;
        clamp_probability((a * ln_det).exp() * sum.value)
    }
}

/// `P(c₁ < x)` from the truncated-polynomial form.
pub fn cdf_largest_gsv<T: Real>(params: &ManovaParams<T>, x: T) -> Result<T> {
    LargestGsvCdf::new(params)?.eval(x)
}

/// `P(c₁ < x)` from the `₂F₁` form with its generalized-Gamma prefactor.
///
/// When the first numerator parameter equals `-t` the series is a finite
/// polynomial whose terms alternate in sign and cancel by many orders of
/// magnitude near `x → 1` (up to ~17 for `t = 8`), so it is summed in
/// double-double arithmetic and `ctl` is ignored. Otherwise the floating-point series is used under `ctl`.
pub fn cdf_largest_gsv_2f1<T: Real>(params: &ManovaParams<T>, x: T, ctl: &SeriesControl<T>) -> Result<SeriesResult<T>> {
    check_unit_open(x)?;
    let ManovaParams { m, n, p, beta, omega } = params;
    let (m, n, p) = (*m, *n, *p);
    let half = beta.half_beta();
    let f = |v: usize| T::from_usize_lossy(v);
    let a1 = (f(n) - f(m) - T::one()) * half + T::one();
    let b1 = f(p) * half;
    let c1 = f(p + n - 1) * half + T::one();
    let ln_ratio = log_gen_gamma(f(m + p) * half, n, beta)? + log_gen_gamma(f(n - 1) * half + T::one(), n, beta)?
        - log_gen_gamma(f(m) * half, n, beta)?
        - log_gen_gamma(f(n + p - 1) * half + T::one(), n, beta)?;

    let (_, z) = cdf_arguments(omega, x)?;
    let ln_det: T = z.iter().map(|v| v.ln()).sum();
    let prefactor = (ln_ratio + b1 * ln_det).exp();
    if let Some(t) = nonpositive_integer(a1) {
        let poly = terminating_2f1_extended(t, b1, c1, beta.beta(), z.values())?;
        return Ok(SeriesResult {
            value: prefactor * poly,
            weight_reached: n * t,
            converged: true,
            tail_estimate: T::zero(),
        });
    }
    let series = hyper_pq(&[a1, b1], &[c1], beta, &z, None, ctl)?;
    Ok(SeriesResult {
        value: prefactor * series.value,
        ..series
    })
}

/// `₂F₁(-t, b; c; Z)` summed over `κ₁ ≤ t` in double-double precision.
fn terminating_2f1_extended<T: Real>(t: usize, b: T, c: T, beta: T, z: &[T]) -> Result<T> {
    let q = |v: T| DoubleDouble::from(v.to_f64().unwrap_or(f64::NAN));
    let beta = BetaParam::new(q(beta))?;
    let (a, b, c) = (DoubleDouble::from(-(t as f64)), q(b), q(c));
    let z: Vec<DoubleDouble> = z.iter().map(|&v| q(v)).collect();
    let plan = JackPlan::new(&beta, z.len(), z.len() * t, Some(t));
    let jack = plan.evaluate(&z);
    let mut factorials = vec![DoubleDouble::from(1.0)];
    for k in 1..=plan.max_weight() {
        let next = factorials[k - 1] * DoubleDouble::from(k as f64);
        factorials.push(next);
    }
    let mut sum = DoubleDouble::from(0.0);
    for (kappa, value) in plan.partitions().iter().zip(jack) {
        let lower = gen_pochhammer(&c, kappa, &beta);
        if lower.is_zero() {
            return Err(Error::Parameter(format!("lower Pochhammer vanishes at {kappa}")));
        }
        let upper = gen_pochhammer(&a, kappa, &beta) * gen_pochhammer(&b, kappa, &beta);
        sum += upper * value / (lower * factorials[kappa.weight()]);
    }
    Ok(T::lit(sum.to_f64()))
}
