//! Special-function identity suite: Jack sum rule, ₁F₀ against its
//! determinant form, the ₂F₁ factorization for a terminating parameter and
//! the Gauss value at the identity.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::combinatorics::{log_gauss_2f1_identity, BetaParam};
use crate::error::Result;
use crate::jack::JackPlan;
use crate::mhg::{f10_closed, hyper_pq, HypergeometricSeries, SeriesControl};
use crate::sampler::RngStream;
use crate::spectrum::DiagSpectrum;

/// Outcome of one identity family.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    /// Largest relative discrepancy over every tested case.
    pub worst_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Where the worst case occurred, followed by every failing case.
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct IdentitySuite {
    pub checks: Vec<IdentityCheck>,
    pub runtime: Duration,
}

impl IdentitySuite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Weight caps for the ₁F₀ series per dimension (index n - 1). Each case is
/// summed to the weight its tail bound asks for, but no further than the cap;
/// a capped case is reported as failing. General arguments need the full
/// Jack recursion, whose cost grows like W^(2n-2); scalar arguments only need
/// the coefficients. The caps keep the suite within its time budget.
pub const F10_GENERAL_CAPS: [usize; 4] = [600, 400, 150, 80];
pub const F10_SCALAR_CAPS: [usize; 4] = [600, 400, 250, 200];
pub const F10_RADIUS: f64 = 0.7;

const SUM_RULE_TOL: f64 = 1e-10;
const F10_TOL: f64 = 1e-8;
const FACTORIZATION_TOL: f64 = 1e-9;
const GAUSS_EXACT_TOL: f64 = 1e-10;
const CONTINUITY_TOL: f64 = 1e-4;
const CONTINUITY_EPS: f64 = 1e-3;

/// Running worst case over a family of comparisons.
struct Tally {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    worst_case: String,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            worst_case: String::new(),
            failures: Vec::new(),
        }
    }

    fn record(&mut self, got: f64, want: f64, case: impl FnOnce() -> String) {
        let err = if got == want { 0.0 } else { (got - want).abs() / want.abs() };
        let err = if err.is_nan() { f64::INFINITY } else { err };
        let failing = !(err <= self.tolerance);
        let worse = err > self.worst || self.worst_case.is_empty();
        if failing || worse {
            let label = case();
            if failing {
                self.failures.push(format!("{label} (err {err:.2e})"));
            }
            if worse {
                self.worst = err;
                self.worst_case = label;
            }
        }
    }

    fn finish(self) -> IdentityCheck {
        let passed = self.failures.is_empty();
        let mut detail = format!("worst at {}", self.worst_case);
        if !passed {
            detail.push_str(&format!("; {} failing case(s): ", self.failures.len()));
            detail.push_str(&self.failures.join("; "));
        }
        IdentityCheck {
            name: self.name,
            worst_error: self.worst,
            tolerance: self.tolerance,
            passed,
            detail,
        }
    }
}

fn uniform_spectrum(rng: &mut RngStream, n: usize, lo: f64, hi: f64) -> DiagSpectrum<f64> {
    DiagSpectrum::new((0..n).map(|_| rng.random_range(lo..hi)).collect()).expect("finite draws")
}

/// `Σ_{κ⊢k} C_κ(x) = (Σ x_i)^k` for k ≤ 6, n ≤ 5 at random x ∈ (0,1)ⁿ.
pub fn jack_sum_rule_check(seed: u64) -> IdentityCheck {
    let mut rng = RngStream::new(seed, 0);
    let mut tally = Tally::new("Jack sum rule", SUM_RULE_TOL);
    for beta in [0.5, 1.0, 2.0, 2.5, 4.0] {
        let bp = BetaParam::new(beta).expect("positive beta");
        for n in 1..=5 {
            let plan = JackPlan::new(&bp, n, 6, None);
            let xs: Vec<_> = (0..5).map(|_| uniform_spectrum(&mut rng, n, 0.0, 1.0)).collect();
            let refs: Vec<&[f64]> = xs.iter().map(|x| x.values()).collect();
            for (x, vals) in xs.iter().zip(plan.evaluate_many(&refs)) {
                let trace = x.trace();
                for k in 0..=6 {
                    let sum: f64 = plan.weight_range(k).map(|i| vals[i]).sum();
                    tally.record(sum, trace.powi(k as i32), || format!("β={beta}, n={n}, k={k}"));
                }
            }
        }
    }
    tally.finish()
}

/// Weight slices of `Π_i (1 - t|x_i|)^{-a}` for a > 0. Since every
/// coefficient of the ₁F₀ series and of C_κ is nonnegative, slice k bounds
/// the weight-k part of ₁F₀(a;;X) in absolute value.
fn f10_slice_bounds(a: f64, x: &DiagSpectrum<f64>, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    out[0] = 1.0;
    for &v in x.iter() {
        let mut single = Vec::with_capacity(len);
        let mut c = 1.0;
        for k in 0..len {
            single.push(c);
            c *= (a + k as f64) * v.abs() / (k + 1) as f64;
        }
        out = (0..len)
            .map(|k| (0..=k).map(|j| out[j] * single[k - j]).sum())
            .collect();
    }
    out
}

/// Smallest truncation weight whose tail bound is below `tol·|value|`.
fn f10_required_weight(a: f64, x: &DiagSpectrum<f64>, value: f64, tol: f64) -> usize {
    const HORIZON: usize = 800;
    let slices = f10_slice_bounds(a, x, HORIZON);
    // Beyond the horizon the slices decay at least geometrically.
    let rho = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut tail = slices[HORIZON - 1] * rho / (1.0 - rho) * 2.0;
    let budget = tol * value.abs();
    for k in (0..HORIZON - 1).rev() {
        if tail + slices[k] > budget {
            return k;
        }
        tail += slices[k];
    }
    0
}

/// ₁F₀(a;;X) summed as a series against `|I - X|^{-a}` at spectral radius
/// ≤ 0.7: both scalar corners ±0.7·I and random X in the cube.
pub fn f10_series_check(seed: u64) -> Result<IdentityCheck> {
    const PARAMS: [f64; 3] = [0.5, 2.0, 7.5];
    let mut rng = RngStream::new(seed, 1);
    let mut tally = Tally::new("1F0 series vs determinant", F10_TOL);
    for n in 1..=4 {
        let corners = vec![
            DiagSpectrum::constant(n, F10_RADIUS),
            DiagSpectrum::constant(n, -F10_RADIUS),
        ];
        let general: Vec<_> = (0..4)
            .map(|_| uniform_spectrum(&mut rng, n, -F10_RADIUS, F10_RADIUS))
            .collect();
        // (a, point) -> (closed form, weight the tail bound asks for)
        let targets = |xs: &[DiagSpectrum<f64>]| -> Result<Vec<Vec<(f64, usize)>>> {
            PARAMS
                .iter()
                .map(|&a| {
                    xs.iter()
                        .map(|x| {
                            let want = f10_closed(a, x)?;
                            Ok((want, f10_required_weight(a, x, want, F10_TOL / 100.0)))
                        })
                        .collect()
                })
                .collect()
        };
        let (corner_targets, general_targets) = (targets(&corners)?, targets(&general)?);
        let weight = |t: &[Vec<(f64, usize)>], cap: usize| t.iter().flatten().map(|p| p.1).max().unwrap_or(0).min(cap);
        let corner_weight = weight(&corner_targets, F10_SCALAR_CAPS[n - 1]);
        let general_weight = weight(&general_targets, F10_GENERAL_CAPS[n - 1]);
        for beta in [1.0, 2.0, 2.5] {
            let bp = BetaParam::new(beta)?;
            for (xs, want, w) in [
                (&corners, &corner_targets, corner_weight),
                (&general, &general_targets, general_weight),
            ] {
                let plan = Arc::new(JackPlan::new(&bp, n, w, None));
                // Scalar corners take the closed-form Jack path inside the
                // series; general points share one sweep over the plan.
                let refs: Vec<&[f64]> = xs.iter().map(|x| x.values()).collect();
                let tables = if xs[0].is_scalar() { None } else { Some(plan.evaluate_many(&refs)) };
                for (&a, want) in PARAMS.iter().zip(want) {
                    let series = HypergeometricSeries::from_plan(&[a], &[], Arc::clone(&plan), 1e-16)?;
                    let values: Vec<f64> = match &tables {
                        Some(tables) => tables.iter().map(|t| series.eval_table(t).value).collect(),
                        None => xs.iter().map(|x| series.eval(x, None).map(|r| r.value)).collect::<Result<_>>()?,
                    };
                    for ((x, got), &(want, needed)) in xs.iter().zip(values).zip(want) {
                        tally.record(got, want, || {
                            let capped = if needed > w { format!(", needs weight {needed} > {w}") } else { String::new() };
                            format!("β={beta}, n={n}, a={a}, X={:?}{capped}", x.values())
                        });
                    }
                }
            }
        }
    }
    Ok(tally.finish())
}

fn exhaustive_ctl(n: usize, t: usize) -> SeriesControl<f64> {
    SeriesControl::new(n * t, 1e-16).expect("positive tolerance")
}

/// `₂F₁(a,b;c;X) = ₂F₁(a,b;c;I) · ₂F₁(a,b;a+b+1+(n-1)β/2-c;I-X)` for
/// `a = -t`, at random X ∈ (0,1)ⁿ, n ≤ 3.
pub fn f21_factorization_check(seed: u64) -> Result<IdentityCheck> {
    let mut rng = RngStream::new(seed, 2);
    let mut tally = Tally::new("2F1 factorization (terminating)", FACTORIZATION_TOL);
    let (b, c) = (2.35, 4.1);
    for beta in [1.0, 2.0, 2.5] {
        let bp = BetaParam::new(beta)?;
        for n in 1..=3 {
            let c2_shift = 1.0 + (n as f64 - 1.0) * beta / 2.0 - c;
            for t in 1..=3 {
                let a = -(t as f64);
                let ctl = exhaustive_ctl(n, t);
                let at_identity = hyper_pq(&[a, b], &[c], &bp, &DiagSpectrum::identity(n), None, &ctl)?.value;
                for _ in 0..5 {
                    let x = uniform_spectrum(&mut rng, n, 0.0, 1.0);
                    let lhs = hyper_pq(&[a, b], &[c], &bp, &x, None, &ctl)?.value;
                    let flipped = x.map(|v| 1.0 - v)?;
                    let rhs = hyper_pq(&[a, b], &[a + b + c2_shift], &bp, &flipped, None, &ctl)?.value;
                    tally.record(at_identity * rhs, lhs, || format!("β={beta}, n={n}, t={t}, X={:?}", x.values()));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// The Gauss value `₂F₁(-t,b;c;I)` from the generalized-Gamma closed form:
/// exactly at I (the series is a polynomial there), and as the limit from
/// `X = (1-ε)I`.
///
/// Moving from I to (1-ε)I changes the value by about ε·n·|ab/(c-a-b-1)|,
/// so the 1e-4 continuity tolerance at ε = 1e-3 needs a shallow slope; b is
/// kept small and c large enough for that.
pub fn gauss_value_checks() -> Result<[IdentityCheck; 2]> {
    let mut exact = Tally::new("2F1 Gauss value at I", GAUSS_EXACT_TOL);
    let mut near = Tally::new("2F1 Gauss value continuity", CONTINUITY_TOL);
    let b = 0.05;
    for beta in [1.0, 2.0, 2.5] {
        let bp = BetaParam::new(beta)?;
        for n in 1..=3 {
            let c = 4.0 + (n as f64 - 1.0) * beta / 2.0;
            for t in 1..=3 {
                let a = -(t as f64);
                let ctl = exhaustive_ctl(n, t);
                let want = log_gauss_2f1_identity(a, b, c, n, &bp)?.exp();
                let at_i = hyper_pq(&[a, b], &[c], &bp, &DiagSpectrum::identity(n), None, &ctl)?.value;
                exact.record(at_i, want, || format!("β={beta}, n={n}, t={t}"));
                let x = DiagSpectrum::constant(n, 1.0 - CONTINUITY_EPS);
                let near_i = hyper_pq(&[a, b], &[c], &bp, &x, None, &ctl)?.value;
                near.record(near_i, want, || format!("β={beta}, n={n}, t={t}, ε={CONTINUITY_EPS}"));
            }
        }
    }
    Ok([exact.finish(), near.finish()])
}

/// Runs every identity family.
pub fn run_identity_suite(seed: u64) -> Result<IdentitySuite> {
    let start = Instant::now();
    let mut checks = vec![jack_sum_rule_check(seed), f10_series_check(seed)?, f21_factorization_check(seed)?];
    checks.extend(gauss_value_checks()?);
    Ok(IdentitySuite {
        checks,
        runtime: start.elapsed(),
    })
}
