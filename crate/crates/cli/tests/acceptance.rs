//! One PASS/FAIL line per acceptance criterion. Failures are reported, not
//! hidden: the process exits 0 so the rest of the test suite still runs, and
//! the summary line states how many criteria passed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use bmanova::harness::{
    dense_real_manova_gsv, ks_critical_value, ks_one_sample, ks_two_sample, ks_two_sample_critical, run_identity_suite,
    sample_gsv, verify_figure, Ecdf,
};
use bmanova::{
    cdf_largest_gsv_2f1, jacobi_logdensity, joint_gsv_logdensity, BetaParam, DiagSpectrum, GsvPoint, LargestGsvCdf,
    ManovaParams64, RngStream, SeriesControl,
};
use rand::Rng;
use statrs::distribution::{Beta, ContinuousCDF};
use statrs::function::beta::beta_reg;

const FIGURE_SEED: u64 = 20240601;
const OMEGA: [f64; 4] = [1.0, 2.0, 2.5, 2.7];

struct Outcome {
    passed: bool,
    summary: String,
}

type Check = Result<Outcome, String>;
type Criterion = (&'static str, fn() -> Check);

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn figure(m: usize, p: usize, beta: f64) -> ManovaParams64 {
    ManovaParams64::new(m, 4, p, beta, OMEGA.to_vec()).unwrap()
}

fn figure_grid() -> Vec<f64> {
    (1..=49).map(|i| i as f64 / 50.0).collect()
}

fn figure_reproduction(params: &ManovaParams64, budget: Duration) -> Check {
    let start = Instant::now();
    let run = verify_figure(params, 10_000, &figure_grid(), 0.01, FIGURE_SEED).map_err(err)?;
    let elapsed = start.elapsed();
    let r = &run.report;
    Ok(Outcome {
        passed: r.passed && elapsed < budget,
        summary: format!(
            "KS {:.5} (critical {:.5}, N={}), runtime {:.2} s (budget {} s)",
            r.ks_stat,
            r.critical_value,
            r.n_samples,
            elapsed.as_secs_f64(),
            budget.as_secs()
        ),
    })
}

fn cross_form() -> Check {
    let ctl = SeriesControl::default();
    let configs = [figure(7, 5, 2.5), figure(9, 6, 3.0), ManovaParams64::new(5, 2, 3, 2.0, vec![1.0, 1.5]).unwrap()];
    let mut worst = 0.0f64;
    for params in &configs {
        let cdf = LargestGsvCdf::new(params).map_err(err)?;
        for i in 1..=50 {
            let x = i as f64 / 51.0;
            let poly = cdf.eval(x).map_err(err)?;
            let hyper = cdf_largest_gsv_2f1(params, x, &ctl).map_err(err)?;
            let diff = if hyper.converged { (poly - hyper.value).abs() } else { f64::INFINITY };
            worst = worst.max(diff);
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-10,
        summary: format!("worst abs difference {worst:.2e} over 3 configs × 50 points (tol 1e-10)"),
    })
}

fn jacobi_reduction() -> Check {
    let (m, n, p, b) = (5, 2, 4, 2.0);
    let params = ManovaParams64::new(m, n, p, b, vec![1.0; n]).unwrap();
    let beta = BetaParam::new(b).map_err(err)?;
    let ctl = SeriesControl::default();
    let mut rng = RngStream::new(FIGURE_SEED, 4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mut c: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..0.99)).collect();
        c.sort_by(|a, b| b.total_cmp(a));
        let point = GsvPoint::new(c).map_err(err)?;
        let c = point.values();
        let u = DiagSpectrum::new(c.iter().map(|v| v * v).collect()).map_err(err)?;
        let jacobian: f64 = c.iter().map(|v| (2.0 * v).ln()).sum();
        let want = jacobi_logdensity(m, n, p, &beta, &u).map_err(err)? + jacobian;
        let got = joint_gsv_logdensity(&params, &point, &ctl).map_err(err)?.value;
        // Relative error of the density itself.
        worst = worst.max((got - want).exp_m1().abs());
    }
    Ok(Outcome {
        passed: worst <= 1e-9,
        summary: format!("worst relative density error {worst:.2e} at 20 points (tol 1e-9)"),
    })
}

fn scalar_oracles() -> Check {
    const N: usize = 100_000;
    let crit = ks_critical_value(0.01, N).map_err(err)?;
    let mut passed = true;
    let mut parts = Vec::new();
    for (k, (m, p, beta)) in [(5usize, 3usize, 2.0), (4, 6, 1.5), (4, 3, 1.0)].into_iter().enumerate() {
        let params = ManovaParams64::new(m, 1, p, beta, vec![1.0]).map_err(err)?;
        let squares = sample_gsv(&params, N, FIGURE_SEED + k as u64).map_err(err)?.iter().map(|c| c[0] * c[0]).collect();
        let ecdf = Ecdf::new(squares).map_err(err)?;
        let (a, b) = (p as f64 * beta / 2.0, m as f64 * beta / 2.0);
        let law = Beta::new(a, b).map_err(err)?;
        let d = ks_one_sample(&ecdf, |u| law.cdf(u));
        let cdf = LargestGsvCdf::new(&params).map_err(err)?;
        let mut worst = 0.0f64;
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let e = (cdf.eval(x).map_err(err)? - beta_reg(a, b, x * x)).abs();
            worst = if e.is_nan() { f64::INFINITY } else { worst.max(e) };
        }
        passed &= d < crit && worst <= 1e-10;
        parts.push(format!("({m},{p},{beta}): KS {d:.5}, CDF {worst:.1e}"));
    }
    Ok(Outcome {
        passed,
        summary: format!("{} (KS critical {crit:.5}, CDF tol 1e-10)", parts.join("; ")),
    })
}

fn dense_oracle() -> Check {
    const N: usize = 10_000;
    let params = figure(7, 5, 1.0);
    let recursive = sample_gsv(&params, N, FIGURE_SEED).map_err(err)?;
    let omega = DiagSpectrum::new(OMEGA.to_vec()).map_err(err)?;
    let mut rng = RngStream::new(FIGURE_SEED, u64::MAX);
    let mut dense = Vec::with_capacity(N);
    for _ in 0..N {
        dense.push(dense_real_manova_gsv(7, 4, 5, &omega, &mut rng).map_err(err)?.gsv);
    }
    let crit = ks_two_sample_critical(0.01, N, N).map_err(err)?;
    let mut stats = Vec::new();
    for i in 0..4 {
        let a = Ecdf::new(recursive.iter().map(|c| c[i]).collect()).map_err(err)?;
        let b = Ecdf::new(dense.iter().map(|c| c[i]).collect()).map_err(err)?;
        stats.push(ks_two_sample(&a, &b));
    }
    Ok(Outcome {
        passed: stats.iter().all(|&d| d < crit),
        summary: format!(
            "two-sample KS c1..c4 = [{}] (critical {crit:.5}, N={N} each)",
            stats.iter().map(|d| format!("{d:.5}")).collect::<Vec<_>>().join(", ")
        ),
    })
}

fn identity_suite() -> Check {
    let suite = run_identity_suite(FIGURE_SEED).map_err(err)?;
    let budget = Duration::from_secs(60);
    let lines: Vec<String> = suite
        .checks
        .iter()
        .map(|c| {
            format!(
                "    {} {}: worst {:.2e} (tol {:.0e})",
                if c.passed { "pass" } else { "fail" },
                c.name,
                c.worst_error,
                c.tolerance
            )
        })
        .collect();
    Ok(Outcome {
        passed: suite.passed() && suite.runtime < budget,
        summary: format!(
            "{} of {} families pass, runtime {:.1} s (budget 60 s)\n{}",
            suite.checks.iter().filter(|c| c.passed).count(),
            suite.checks.len(),
            suite.runtime.as_secs_f64(),
            lines.join("\n")
        ),
    })
}

fn bmanova(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_bmanova")).args(args).output().map_err(err)
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    let config = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/figure1.json");
    let ensemble = ["--m", "7", "--n", "4", "--p", "5", "--beta", "2.5", "--omega", "1,2,2.5,2.7"];
    let mut identical = Vec::new();
    let mut outputs: [Vec<Vec<u8>>; 2] = Default::default();
    for (run, out) in outputs.iter_mut().enumerate() {
        let root = dir.path().join(format!("run{run}"));
        let sample = root.join("sample.csv");
        let cdf = root.join("cdf.csv");
        let verify = root.join("verify");
        let mut args = vec!["sample"];
        args.extend(ensemble);
        args.extend(["--num", "1000", "--seed", "99", "--out", sample.to_str().unwrap()]);
        bmanova(&args)?;
        let mut args = vec!["cdf"];
        args.extend(ensemble);
        args.extend(["--grid", "0.02:0.02:0.98", "--out", cdf.to_str().unwrap()]);
        bmanova(&args)?;
        bmanova(&["verify", "--config", config.to_str().unwrap(), "--out-dir", verify.to_str().unwrap()])?;
        let selftest = bmanova(&["selftest"])?;
        for path in [sample, cdf, verify.join("report.json"), verify.join("curve.csv"), verify.join("figure.svg")] {
            out.push(read(&path)?);
        }
        out.push(selftest.stdout);
        out.push(vec![selftest.status.code().unwrap_or(-1) as u8]);
    }
    let names = ["sample", "cdf", "report.json", "curve.csv", "figure.svg", "selftest stdout", "selftest exit code"];
    for (name, (a, b)) in names.iter().zip(outputs[0].iter().zip(&outputs[1])) {
        identical.push((name, a == b && !a.is_empty()));
    }
    Ok(Outcome {
        passed: identical.iter().all(|(_, same)| *same),
        summary: identical
            .iter()
            .map(|(name, same)| format!("{name} {}", if *same { "identical" } else { "DIFFERS" }))
            .collect::<Vec<_>>()
            .join(", "),
    })
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("figure1 config: m=7, n=4, p=5, β=2.5", || figure_reproduction(&figure(7, 5, 2.5), Duration::from_secs(60))),
        ("figure2 config: m=9, n=4, p=6, β=3", || figure_reproduction(&figure(9, 6, 3.0), Duration::from_secs(120))),
        ("cross-form exactness", cross_form),
        ("Jacobi reduction at identity covariance", jacobi_reduction),
        ("scalar oracles", scalar_oracles),
        ("real dense-Gaussian oracle", dense_oracle),
        ("special-function identity suite", identity_suite),
        ("CLI determinism", determinism),
    ];
    let mut passed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, summary) = match check() {
            Ok(o) => (o.passed, o.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        passed += ok as usize;
        println!("{} {}. {name}: {summary}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {passed} of {} criteria passed", criteria.len());
}
