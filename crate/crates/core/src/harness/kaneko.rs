use rand::Rng;

use crate::combinatorics::{ln_gamma, BetaParam, Partition};
use crate::error::{Error, Result};
use crate::jack::{jack_c_identity, JackPlan};
use crate::scalar::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KanekoCheck {
    pub mc_estimate: f64,
    pub std_error: f64,
    pub closed_form: f64,
}

impl KanekoCheck {
    pub fn within(&self, standard_errors: f64) -> bool {
        (self.mc_estimate - self.closed_form).abs() <= standard_errors * self.std_error
    }
}

/// `∫_{(0,1)ⁿ} C_κ(x) |Δ(x)|^β ∏ xᵢ^a (1 − xᵢ)^b dx` in closed form.
pub fn kaneko_closed_form(kappa: &Partition, a: f64, b: f64, beta: &BetaParam<f64>, n: usize) -> Result<f64> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Precondition(format!("need a, b > -1, got a={a}, b={b}")));
    }
    if kappa.len() > n {
        return Err(Error::Precondition(format!("partition {kappa} has more than {n} parts")));
    }
    let h = beta.half_beta();
    let mut log = 0.0;
    for i in 1..=n {
        let k = kappa.part(i - 1) as f64;
        let shift = h * (n - i) as f64;
        log += ln_gamma(i as f64 * h + 1.0) + ln_gamma(k + a + shift + 1.0) + ln_gamma(b + shift + 1.0)
            - ln_gamma(h + 1.0)
            - ln_gamma(k + a + b + h * (2 * n - i - 1) as f64 + 2.0);
    }
    Ok(jack_c_identity(kappa, beta, n) * log.exp())
}

/// Plain Monte-Carlo estimate of the same integral over the unit cube.
pub fn kaneko_mc_check<R: Rng + ?Sized>(
    kappa: &Partition,
    a: f64,
    b: f64,
    beta: &BetaParam<f64>,
    n: usize,
    n_points: usize,
    rng: &mut R,
) -> Result<KanekoCheck> {
    let closed_form = kaneko_closed_form(kappa, a, b, beta, n)?;
    if n_points < 2 {
        return Err(Error::Precondition("need at least two Monte-Carlo points".into()));
    }
    let plan = JackPlan::for_shape(beta, n, kappa);
    let idx = plan.index_of(kappa).expect("shape is in its own plan");
    let (mut sum, mut sum_sq) = (CompensatedSum::new(), CompensatedSum::new());
    let mut x = vec![0.0; n];
    for _ in 0..n_points {
        x.iter_mut().for_each(|v| *v = rng.random::<f64>());
        let mut f = plan.evaluate(&x)[idx];
        for i in 0..n {
            f *= x[i].powf(a) * (1.0 - x[i]).powf(b);
            for j in i + 1..n {
                f *= (x[i] - x[j]).abs().powf(beta.beta());
            }
        }
        sum.add(f);
        sum_sq.add(f * f);
    }
    let np = n_points as f64;
    let mean = sum.value() / np;
    let var = (sum_sq.value() / np - mean * mean).max(0.0) * np / (np - 1.0);
    Ok(KanekoCheck { mc_estimate: mean, std_error: (var / np).sqrt(), closed_form })
}
