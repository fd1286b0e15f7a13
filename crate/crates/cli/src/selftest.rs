//! `selftest`: the special-function identity suite plus the scalar (n = 1)
//! oracles, which isolate sampler and CDF faults before the n > 1 checks.

use bmanova::harness::{ks_critical_value, ks_one_sample, run_identity_suite, sample_gsv, Ecdf};
use bmanova::{LargestGsvCdf, ManovaParams64};
use statrs::distribution::{Beta, ContinuousCDF};
use statrs::function::beta::beta_reg;

use crate::CliError;

pub const SEED: u64 = 0x5e1f_7e57;
const ORACLE_SAMPLES: usize = 100_000;
const CDF_TOL: f64 = 1e-10;

/// (m, p, β): each has an integer truncation order t = mβ/2 - 1.
pub const SCALAR_CASES: [(usize, usize, f64); 3] = [(5, 3, 2.0), (4, 6, 1.5), (4, 3, 1.0)];

pub struct Item {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub detail: Option<String>,
}

/// `c²` for n = 1, Ω = 1 against Beta(pβ/2, mβ/2) by one-sample KS.
fn scalar_sampler_item(m: usize, p: usize, beta: f64, seed: u64) -> Result<Item, CliError> {
    let params = ManovaParams64::new(m, 1, p, beta, vec![1.0])?;
    let squares = sample_gsv(&params, ORACLE_SAMPLES, seed)?.iter().map(|c| c[0] * c[0]).collect();
    let ecdf = Ecdf::new(squares)?;
    let law = Beta::new(p as f64 * beta / 2.0, m as f64 * beta / 2.0)
        .map_err(|e| CliError::usage(format!("reference Beta law: {e}")))?;
    let d = ks_one_sample(&ecdf, |u| law.cdf(u));
    let crit = ks_critical_value(0.01, ORACLE_SAMPLES)?;
    Ok(Item {
        name: format!("n=1 sampler vs Beta (m={m}, p={p}, β={beta})"),
        passed: d < crit,
        summary: format!("KS {d:.5} (critical {crit:.5}, N={ORACLE_SAMPLES})"),
        detail: None,
    })
}

/// Largest-value CDF at n = 1, Ω = 1 against `I_{x²}(pβ/2, mβ/2)`.
fn scalar_cdf_item(m: usize, p: usize, beta: f64) -> Result<Item, CliError> {
    let params = ManovaParams64::new(m, 1, p, beta, vec![1.0])?;
    let cdf = LargestGsvCdf::new(&params)?;
    let (a, b) = (p as f64 * beta / 2.0, m as f64 * beta / 2.0);
    let mut worst = (0.0f64, 0.0);
    for i in 1..100 {
        let x = i as f64 / 100.0;
        let err = (cdf.eval(x)? - beta_reg(a, b, x * x)).abs();
        if err > worst.0 || err.is_nan() {
            worst = (err, x);
        }
    }
    Ok(Item {
        name: format!("n=1 CDF vs incomplete beta (m={m}, p={p}, β={beta})"),
        passed: worst.0 <= CDF_TOL,
        summary: format!("worst abs error {:.2e} at x={} (tol {CDF_TOL:.0e})", worst.0, worst.1),
        detail: None,
    })
}

pub fn run(seed: u64) -> Result<Vec<Item>, CliError> {
    let mut items = Vec::new();
    for (k, &(m, p, beta)) in SCALAR_CASES.iter().enumerate() {
        items.push(scalar_sampler_item(m, p, beta, seed.wrapping_add(k as u64))?);
        items.push(scalar_cdf_item(m, p, beta)?);
    }
    let suite = run_identity_suite(seed)?;
    for check in suite.checks {
        items.push(Item {
            name: check.name.to_string(),
            passed: check.passed,
            summary: format!("worst error {:.2e} (tol {:.0e})", check.worst_error, check.tolerance),
            detail: Some(check.detail),
        });
    }
    Ok(items)
}
