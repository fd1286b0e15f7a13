use bmanova::densities::joint_gsv_logdensity_with;
use bmanova::{
    cdf_largest_gsv_2f1, jacobi_logdensity, joint_gsv_logdensity, BetaParam, DiagSpectrum, GsvPoint, KernelRoute,
    LargestGsvCdf, ManovaParams, RngStream, SeriesControl,
};
use rand::Rng;
use statrs::distribution::{Beta, Continuous};
use statrs::function::beta::beta_reg;

/// Composite 5-point Gauss–Legendre on [a, b]; nodes never touch the ends.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [0.0, 0.5384693101056831, -0.5384693101056831, 0.906179845938664, -0.906179845938664];
    const W: [f64; 5] = [0.5688888888888889, 0.47862867049936647, 0.47862867049936647, 0.23692688505618908, 0.23692688505618908];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            X.iter().zip(W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// ∫∫ over 1 > x > y > 0 via y = x·s.
fn integrate_ordered_pair(f: impl Fn(f64, f64) -> f64, panels: usize) -> f64 {
    integrate(|x| x * integrate(|s| f(x, x * s), 0.0, 1.0, panels), 0.0, 1.0, panels)
}

fn beta(b: f64) -> BetaParam<f64> {
    BetaParam::new(b).unwrap()
}

#[test]
fn scalar_jacobi_is_the_beta_density() {
    for (m, p, b) in [(3, 2, 1.0), (5, 4, 2.5), (2, 7, 0.6)] {
        let law = Beta::new(p as f64 * b / 2.0, m as f64 * b / 2.0).unwrap();
        for u in [0.05, 0.3, 0.5, 0.77, 0.95] {
            let got = jacobi_logdensity(m, 1, p, &beta(b), &DiagSpectrum::new(vec![u]).unwrap()).unwrap();
            assert!((got - law.ln_pdf(u)).abs() <= 1e-12 * law.ln_pdf(u).abs().max(1.0), "{got} vs {}", law.ln_pdf(u));
        }
    }
}

#[test]
fn jacobi_density_integrates_to_one() {
    let b = beta(1.0);
    let mass = integrate_ordered_pair(
        |u1, u2| jacobi_logdensity(3, 2, 3, &b, &DiagSpectrum::new(vec![u1, u2]).unwrap()).unwrap().exp(),
        20,
    );
    assert!((mass - 1.0).abs() < 1e-5, "{mass}");
}

#[test]
fn joint_density_integrates_to_one() {
    let ctl = SeriesControl::default();
    let params = ManovaParams::new(4, 1, 3, 1.5, vec![0.8]).unwrap();
    let density = |c: f64| joint_gsv_logdensity(&params, &GsvPoint::new(vec![c]).unwrap(), &ctl).unwrap().value.exp();
    let mass = integrate(density, 0.0, 1.0, 200);
    assert!((mass - 1.0).abs() < 1e-6, "n=1: {mass}");

    let params = ManovaParams::new(4, 2, 3, 2.0, vec![0.9, 0.9]).unwrap();
    let mass = integrate_ordered_pair(
        |c1, c2| {
            joint_gsv_logdensity(&params, &GsvPoint::new(vec![c1, c2]).unwrap(), &ctl)
                .unwrap()
                .value
                .exp()
        },
        40,
    );
    assert!((mass - 1.0).abs() < 1e-6, "n=2: {mass}");
}

fn random_point(rng: &mut RngStream, n: usize, hi: f64) -> GsvPoint<f64> {
    let mut c: Vec<f64> = (0..n).map(|_| rng.random_range(0.02..hi)).collect();
    c.sort_by(|a, b| b.total_cmp(a));
    GsvPoint::new(c).unwrap()
}

#[test]
fn identity_covariance_reduces_to_jacobi() {
    // c² ~ β-Jacobi, so ln f(c) = ln g(c²) + Σ ln 2cᵢ.
    let (m, n, p, b) = (5, 2, 4, 2.0);
    let params = ManovaParams::new(m, n, p, b, vec![1.0; n]).unwrap();
    let ctl = SeriesControl::default();
    let mut rng = RngStream::new(51, 0);
    for _ in 0..20 {
        let point = random_point(&mut rng, n, 0.98);
        let c = point.values();
        let u = c.map(|v| v * v).unwrap();
        let want = jacobi_logdensity(m, n, p, &beta(b), &u).unwrap() + c.iter().map(|v| (2.0 * v).ln()).sum::<f64>();
        let got = joint_gsv_logdensity(&params, &point, &ctl).unwrap().value;
        assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{c:?}: {got} vs {want}");
    }
    // The series route agrees where the kernel argument is small.
    let ctl = SeriesControl::new(200, 1e-14).unwrap();
    for _ in 0..5 {
        let point = random_point(&mut rng, n, 0.35);
        let auto = joint_gsv_logdensity(&params, &point, &ctl).unwrap().value;
        let series = joint_gsv_logdensity_with(&params, &point, &ctl, KernelRoute::Series).unwrap();
        assert!(series.converged);
        assert!((auto - series.value).abs() <= 1e-9 * auto.abs().max(1.0), "{auto} vs {}", series.value);
    }
}

#[test]
fn scalar_cdf_is_the_incomplete_beta() {
    for (m, p, b) in [(5, 3, 2.0), (4, 6, 1.5), (4, 3, 1.0), (6, 2, 1.0)] {
        let params = ManovaParams::new(m, 1, p, b, vec![1.0]).unwrap();
        let cdf = LargestGsvCdf::new(&params).unwrap();
        for x in [0.2, 0.5, 0.8] {
            let want = beta_reg(p as f64 * b / 2.0, m as f64 * b / 2.0, x * x);
            let got = cdf.eval(x).unwrap();
            assert!((got - want).abs() <= 1e-10, "m={m} p={p} β={b} x={x}: {got} vs {want}");
        }
    }
}

fn figure_params() -> ManovaParams<f64> {
    ManovaParams::new(7, 4, 5, 2.5, vec![1.0, 2.0, 2.5, 2.7]).unwrap()
}

#[test]
fn polynomial_and_hypergeometric_forms_agree() {
    let ctl = SeriesControl::default();
    for params in [
        figure_params(),
        ManovaParams::new(9, 4, 6, 3.0, vec![1.0, 2.0, 2.5, 2.7]).unwrap(),
        ManovaParams::new(6, 3, 4, 1.0, vec![0.5, 1.0, 3.0]).unwrap(),
    ] {
        let cdf = LargestGsvCdf::new(&params).unwrap();
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let poly = cdf.eval(x).unwrap();
            let hyper = cdf_largest_gsv_2f1(&params, x, &ctl).unwrap();
            assert!(hyper.converged);
            assert!((poly - hyper.value).abs() <= 1e-10, "m={} x={x}: {poly} vs {}", params.m, hyper.value);
        }
    }
}

#[test]
fn cdf_shape() {
    let params = figure_params();
    let cdf = LargestGsvCdf::new(&params).unwrap();
    let values: Vec<f64> = (1..=100).map(|i| cdf.eval(i as f64 / 101.0).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert!(values[0] >= 0.0 && values[99] <= 1.0);
    assert!(cdf.eval(0.9999).unwrap() > 0.999);

    // A larger Ω pulls the values towards zero.
    let wider = ManovaParams::new(7, 4, 5, 2.5, vec![2.0, 4.0, 5.0, 5.4]).unwrap();
    let wider = LargestGsvCdf::new(&wider).unwrap();
    for x in [0.3, 0.6, 0.9] {
        assert!(wider.eval(x).unwrap() > cdf.eval(x).unwrap());
    }
}
