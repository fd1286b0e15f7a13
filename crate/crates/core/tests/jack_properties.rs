use bmanova::combinatorics::{partitions_of, BetaParam, Partition};
use bmanova::jack::{build_jack_table, jack_c, jack_c_identity};
use bmanova::RngStream;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

const BETAS: [f64; 5] = [0.5, 1.0, 2.0, 2.5, 4.0];

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn random_point(rng: &mut RngStream, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_slices_sum_to_trace_powers(
        beta_idx in 0usize..5,
        x in prop::collection::vec(0.0f64..1.0, 1..=5),
    ) {
        let beta = BetaParam::new(BETAS[beta_idx]).unwrap();
        let table = build_jack_table(&beta, &x, 6);
        let trace: f64 = x.iter().sum();
        for k in 0..=6 {
            let sum: f64 = table.weight_slice(k).map(|(_, v)| v).sum();
            let want = trace.powi(k as i32);
            prop_assert!((sum - want).abs() <= 1e-10 * want.max(f64::MIN_POSITIVE), "k={} {} vs {}", k, sum, want);
        }
    }

    #[test]
    fn mixed_sign_arguments_keep_the_sum_rule(
        x in prop::collection::vec(-1.0f64..1.0, 1..=4),
    ) {
        // Signed evaluation: no absolute values anywhere.
        let beta = BetaParam::new(2.5).unwrap();
        let table = build_jack_table(&beta, &x, 5);
        let trace: f64 = x.iter().sum();
        let scale: f64 = x.iter().map(|v| v.abs()).sum();
        for k in 0..=5 {
            let sum: f64 = table.weight_slice(k).map(|(_, v)| v).sum();
            prop_assert!((sum - trace.powi(k as i32)).abs() <= 1e-12 * scale.powi(k as i32).max(1.0));
        }
    }
}

#[test]
fn homogeneity() {
    let mut rng = RngStream::new(11, 0);
    for &b in &BETAS {
        let beta = BetaParam::new(b).unwrap();
        for n in 1..=4 {
            let x = random_point(&mut rng, n, 0.0, 1.0);
            let table = build_jack_table(&beta, &x, 6);
            for c in [0.5, 2.0] {
                let cx: Vec<f64> = x.iter().map(|v| c * v).collect();
                let scaled = build_jack_table(&beta, &cx, 6);
                for k in 0..=6 {
                    for ((kappa, v), (_, w)) in table.weight_slice(k).zip(scaled.weight_slice(k)) {
                        let want = c.powi(k as i32) * v;
                        assert!(rel(*w, want) <= 1e-11, "β={b} κ={kappa} c={c}: {w} vs {want}");
                    }
                }
            }
        }
    }
}

#[test]
fn permutation_invariance() {
    let mut rng = RngStream::new(12, 0);
    let beta = BetaParam::new(2.5).unwrap();
    let x = random_point(&mut rng, 5, -1.0, 1.0);
    let base = build_jack_table(&beta, &x, 6);
    for _ in 0..10 {
        let mut y = x.clone();
        y.shuffle(&mut rng);
        let permuted = build_jack_table(&beta, &y, 6);
        for (v, w) in base.values().iter().zip(permuted.values()) {
            assert!((v - w).abs() <= 1e-13 * v.abs().max(1e-3), "{v} vs {w}");
        }
    }
}

#[test]
fn vanishes_exactly_beyond_the_dimension() {
    let beta = BetaParam::new(1.5).unwrap();
    let x = [0.3f64, -0.4];
    for kappa in partitions_of(5, 5, None) {
        let v = jack_c(&kappa, &beta, &x);
        if kappa.len() > 2 {
            assert_eq!(v, 0.0, "{kappa}");
        } else {
            assert!(v != 0.0, "{kappa}");
        }
    }
    assert_eq!(jack_c(&Partition::new(vec![1, 1]).unwrap(), &beta, &[0.7]), 0.0);
    assert_eq!(jack_c_identity(&Partition::new(vec![1, 1, 1]).unwrap(), &beta, 2), 0.0);
}

#[test]
fn documented_examples() {
    let beta = BetaParam::new(2.0).unwrap();
    let x = [0.3f64, 0.7];
    let two = jack_c(&Partition::new(vec![2]).unwrap(), &beta, &x);
    let one_one = jack_c(&Partition::new(vec![1, 1]).unwrap(), &beta, &x);
    assert!((two + one_one - 1.0).abs() < 1e-15);
    let b = BetaParam::new(2.5).unwrap();
    let s: f64 = partitions_of(3, 2, None).iter().map(|k| jack_c_identity(k, &b, 2)).sum();
    assert!((s - 8.0).abs() < 1e-13);
    assert_eq!(jack_c(&Partition::new(vec![2]).unwrap(), &b, &[0.6]), 0.36);
}

#[test]
fn table_matches_independent_evaluations() {
    let mut rng = RngStream::new(13, 0);
    for &b in &BETAS {
        let beta = BetaParam::new(b).unwrap();
        for n in 1..=4 {
            let x = random_point(&mut rng, n, -0.9, 0.9);
            let table = build_jack_table(&beta, &x, 6);
            for k in 0..=6 {
                for (kappa, v) in table.weight_slice(k) {
                    let direct = jack_c(kappa, &beta, &x);
                    assert!((v - direct).abs() <= 1e-11 * direct.abs().max(1e-6), "β={b} κ={kappa}: {v} vs {direct}");
                }
            }
            let identity = build_jack_table(&beta, &vec![1.0; n], 6);
            for k in 0..=6 {
                for (kappa, v) in identity.weight_slice(k) {
                    assert!(rel(*v, jack_c_identity(kappa, &beta, n)) <= 1e-12, "{kappa}");
                }
            }
        }
    }
}

/// Schur polynomial by the bialternant det(x_i^{κ_j+n-j}) / det(x_i^{n-j}).
fn schur(kappa: &Partition, x: &[f64]) -> f64 {
    let n = x.len();
    let alt = |shift: &dyn Fn(usize) -> usize| DMatrix::from_fn(n, n, |i, j| x[i].powi(shift(j) as i32)).determinant();
    alt(&|j| kappa.part(j) + n - 1 - j) / alt(&|j| n - 1 - j)
}

fn hook_product(kappa: &Partition) -> f64 {
    let conj = kappa.conjugate();
    let mut h = 1.0;
    for (i, &len) in kappa.parts().iter().enumerate() {
        for (j, &height) in conj.iter().enumerate().take(len) {
            let (arm, leg) = (len - j - 1, height - i - 1);
            h *= (arm + leg + 1) as f64;
        }
    }
    h
}

#[test]
fn beta_two_is_a_scaled_schur_polynomial() {
    // At β = 2 the C normalization is C_κ = k!/H_κ · s_κ.
    let beta = BetaParam::new(2.0).unwrap();
    let mut rng = RngStream::new(14, 0);
    for n in 1..=3 {
        let x = random_point(&mut rng, n, 0.1, 1.0);
        for k in 1..=4 {
            let factorial: f64 = (1..=k).map(|i| i as f64).product();
            for kappa in partitions_of(k, n, None) {
                let want = factorial / hook_product(&kappa) * schur(&kappa, &x);
                let got = jack_c(&kappa, &beta, &x);
                assert!(rel(got, want) <= 1e-9, "n={n} κ={kappa}: {got} vs {want}");
            }
        }
    }
}
