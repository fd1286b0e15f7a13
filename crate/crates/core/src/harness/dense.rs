use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;
use crate::sampler::SampleReal;
use crate::spectrum::DiagSpectrum;

/// Redraw threshold on the condition number of `YᵀY`.
pub const MAX_CONDITION: f64 = 1e12;

const MAX_REDRAWS: usize = 1000;

/// A dense-oracle draw together with the number of ill-conditioned redraws
/// it needed.
#[derive(Clone, Debug)]
pub struct DenseDraw {
    pub gsv: DiagSpectrum<f64>,
    pub redraws: usize,
}

/// Cosine generalized singular values of `(Y, XΩ)` for real Gaussian `X`
/// (m × n) and `Y` (p × n), i.e. `c = (μ + 1)^{-1/2}` for the eigenvalues μ
/// of `ΩXᵀXΩ v = μ YᵀY v`.
pub fn dense_real_manova_gsv<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    p: usize,
    omega: &DiagSpectrum<f64>,
    rng: &mut R,
) -> Result<DenseDraw> {
    if n == 0 || m < n || p < n || omega.len() != n {
        return Err(Error::Precondition(format!("dense oracle needs m, p >= n = |omega|, got m={m}, n={n}, p={p}")));
    }
    for redraws in 0..MAX_REDRAWS {
        let x = gaussian(m, n, rng);
        let y = gaussian(p, n, rng);
        let mut a = gram(&x, m, n);
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] *= omega[i] * omega[j];
            }
        }
        let b = gram(&y, p, n);
        let eb = sym_eigen(&b, n);
        let (lo, hi) = eb.values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if !(lo > 0.0) || hi / lo > MAX_CONDITION {
            continue;
        }
        // W = B^{-1/2}; the pencil (A, B) has the spectrum of W A W.
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                w[i * n + j] = (0..n)
                    .map(|k| eb.vectors[i * n + k] * eb.vectors[j * n + k] / eb.values[k].sqrt())
                    .sum();
            }
        }
        let s = mul(&mul(&w, &a, n), &w, n);
        let mu = sym_eigen(&s, n).values;
        let gsv = DiagSpectrum::new(mu.iter().map(|&v| 1.0 / (v.max(0.0) + 1.0).sqrt()).collect())?.sorted_desc();
        return Ok(DenseDraw { gsv, redraws });
    }
    Err(Error::Domain("dense oracle: YᵀY ill-conditioned on every redraw".into()))
}

fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<f64> {
    (0..rows * cols).map(|_| f64::standard_normal(rng)).collect()
}

/// `MᵀM` for a row-major `rows × cols` matrix.
fn gram(mat: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut g = vec![0.0; cols * cols];
    for i in 0..cols {
        for j in i..cols {
            let v: f64 = (0..rows).map(|r| mat[r * cols + i] * mat[r * cols + j]).sum();
            g[i * cols + j] = v;
            g[j * cols + i] = v;
        }
    }
    g
}

fn mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}
