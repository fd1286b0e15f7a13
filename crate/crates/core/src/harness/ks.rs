use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Empirical CDF over a fixed sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Precondition("empirical CDF needs at least one sample".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("samples must be finite".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn count(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.count() as f64
    }
}

/// One-sample KS statistic `sup |F_N - F|` against a reference CDF.
pub fn ks_one_sample(e: &Ecdf, cdf: impl Fn(f64) -> f64) -> f64 {
    let values: Vec<f64> = e.sorted.iter().map(|&x| cdf(x)).collect();
    ks_one_sample_sorted(e, &values)
}

/// KS statistic from reference CDF values already evaluated at the sorted
/// sample points.
///
/// # Panics
/// If `cdf_at_samples` has a different length from the sample.
pub fn ks_one_sample_sorted(e: &Ecdf, cdf_at_samples: &[f64]) -> f64 {
    assert_eq!(cdf_at_samples.len(), e.count());
    let n = e.count() as f64;
    let mut d = 0.0f64;
    for (i, &f) in cdf_at_samples.iter().enumerate() {
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    d
}

/// Two-sample KS statistic `sup |F_1 - F_2|`.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf) -> f64 {
    let (xs, ys) = (&a.sorted, &b.sorted);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

fn kolmogorov_quantile(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("alpha must be in (0, 1), got {alpha}")));
    }
    Ok((-(alpha / 2.0).ln() / 2.0).sqrt())
}

/// Critical value of the one-sample KS statistic at level `alpha`:
/// `c(α)/√N` for `N >= 1000`, with Stephens' finite-sample correction
/// `c(α)/(√N + 0.12 + 0.11/√N)` below that.
pub fn ks_critical_value(alpha: f64, n: usize) -> Result<f64> {
    let c = kolmogorov_quantile(alpha)?;
    if n == 0 {
        return Err(Error::Precondition("KS critical value needs N >= 1".into()));
    }
    let s = (n as f64).sqrt();
    Ok(if n >= 1000 { c / s } else { c / (s + 0.12 + 0.11 / s) })
}

/// Asymptotic two-sample critical value `c(α)·√((n₁+n₂)/(n₁n₂))`.
pub fn ks_two_sample_critical(alpha: f64, n1: usize, n2: usize) -> Result<f64> {
    let c = kolmogorov_quantile(alpha)?;
    if n1 == 0 || n2 == 0 {
        return Err(Error::Precondition("two-sample KS needs non-empty samples".into()));
    }
    let (a, b) = (n1 as f64, n2 as f64);
    Ok(c * ((a + b) / (a * b)).sqrt())
}

/// Outcome of an empirical-vs-analytic comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub n_samples: usize,
    pub ks_stat: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub passed: bool,
    pub config_digest: String,
    /// Wall-clock time; left out of the serialized report so that reports
    /// are byte-identical across runs.
    #[serde(skip)]
    pub runtime_ms: u64,
}

impl KsReport {
    pub fn new(n_samples: usize, ks_stat: f64, alpha: f64, config_digest: String, runtime_ms: u64) -> Result<Self> {
        let critical_value = ks_critical_value(alpha, n_samples)?;
        Ok(Self {
            n_samples,
            ks_stat,
            critical_value,
            alpha,
            passed: ks_stat < critical_value,
            config_digest,
            runtime_ms,
        })
    }
}
