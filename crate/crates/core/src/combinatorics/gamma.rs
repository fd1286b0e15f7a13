use crate::error::{Error, Result};
use crate::scalar::Real;

use super::BetaParam;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7). Returns NaN for `x <= 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if !(x > T::zero()) {
        return T::nan();
    }
    if x < T::lit(0.5) {
        return ln_gamma(x + T::one()) - x.ln();
    }
    let z = x - T::one();
    let mut sum = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += T::lit(c) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    half_ln_2pi + (z + T::lit(0.5)) * t.ln() - t + sum.ln()
}

/// `ln Γ_n^{(β)}(c) = n(n-1)β/4 · ln π + Σ ln Γ(c - (i-1)β/2)`, real `c` only.
pub fn log_gen_gamma<T: Real>(c: T, n: usize, beta: &BetaParam<T>) -> Result<T> {
    let half_beta = beta.half_beta();
    let nf = T::from_usize_lossy(n);
    let mut acc = nf * (nf - T::one()) * beta.beta() / T::lit(4.0) * T::PI().ln();
    for i in 0..n {
        let arg = c - T::from_usize_lossy(i) * half_beta;
        if !(arg > T::zero()) {
            return Err(Error::Domain(format!(
                "generalized Gamma argument c - {i}·β/2 = {arg} is not positive (c = {c}, n = {n})"
            )));
        }
        acc += ln_gamma(arg);
    }
    Ok(acc)
}

/// `ln 𝒦_{m,n}^{(β)}`, the Wishart normalization constant. Requires `m >= n`.
pub fn log_k_constant<T: Real>(m: usize, n: usize, beta: &BetaParam<T>) -> Result<T> {
    if n == 0 || m < n {
        return Err(Error::Precondition(format!("K constant needs m >= n >= 1, got m={m}, n={n}")));
    }
    let b = beta.beta();
    let (mf, nf) = (T::from_usize_lossy(m), T::from_usize_lossy(n));
    let two = T::lit(2.0);
    Ok(mf * nf * b / two * two.ln() - nf * (nf - T::one()) * b / two * T::PI().ln()
        + log_gen_gamma(mf * b / two, n, beta)?
        + log_gen_gamma(nf * b / two, n, beta)?
        - nf * ln_gamma(b / two))
}

/// Logarithm of the Gauss value `₂F₁^{(β)}(a, b; c; I_n)` from the
/// generalized-Gamma closed form.
pub fn log_gauss_2f1_identity<T: Real>(a: T, b: T, c: T, n: usize, beta: &BetaParam<T>) -> Result<T> {
    Ok(log_gen_gamma(c, n, beta)? + log_gen_gamma(c - a - b, n, beta)?
        - log_gen_gamma(c - a, n, beta)?
        - log_gen_gamma(c - b, n, beta)?)
}
