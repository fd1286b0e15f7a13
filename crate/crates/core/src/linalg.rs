//! Small dense symmetric eigensolver (cyclic Jacobi) and the broken-arrow
//! singular values used by the recursive Wishart sampler.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectrum::DiagSpectrum;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen<T> {
    /// Eigenvalues, unsorted, matching the columns of `vectors`.
    pub values: Vec<T>,
    /// Row-major `n × n`; column `k` is the eigenvector for `values[k]`.
    pub vectors: Vec<T>,
    pub sweeps: usize,
}

/// Cyclic Jacobi on a row-major symmetric `n × n` matrix. Stops once the
/// off-diagonal Frobenius norm drops below `1e-14 · ‖A‖_F`.
pub fn sym_eigen<T: Real>(a: &[T], n: usize) -> SymEigen<T> {
    assert_eq!(a.len(), n * n, "matrix must be n × n");
    let mut a = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let tol = T::lit(1e-14).max(T::epsilon());
    let norm = a.iter().map(|&x| x * x).sum::<T>().sqrt();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= tol * norm {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                rotate(&mut a, n, p, q, c, s);
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    SymEigen {
        values: (0..n).map(|i| a[i * n + i]).collect(),
        vectors: v,
        sweeps,
    }
}

fn off_diagonal_norm<T: Real>(a: &[T], n: usize) -> T {
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Applies `JᵀAJ` for the rotation in the (p, q) plane.
fn rotate<T: Real>(a: &mut [T], n: usize, p: usize, q: usize, c: T, s: T) {
    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
}

/// Singular values, descending, of the `n × n` broken-arrow matrix with
/// `diag_block` on the leading diagonal, `last_col` in rows `1..n-1` of the
/// last column and `corner` at `(n, n)`.
pub fn arrow_singular_values<T: Real>(diag_block: &[T], last_col: &[T], corner: T) -> Result<DiagSpectrum<T>> {
    if diag_block.len() != last_col.len() {
        return Err(Error::Precondition("arrow block and column lengths differ".into()));
    }
    let n = diag_block.len() + 1;
    // ZᵀZ is itself an arrow matrix.
    let mut g = vec![T::zero(); n * n];
    let last = n - 1;
    let mut corner_sq = corner * corner;
    for (i, (&d, &v)) in diag_block.iter().zip(last_col).enumerate() {
        g[i * n + i] = d * d;
        g[i * n + last] = d * v;
        g[last * n + i] = d * v;
        corner_sq += v * v;
    }
    g[last * n + last] = corner_sq;
    let eig = sym_eigen(&g, n);
    let sv = eig.values.into_iter().map(|l| l.max(T::zero()).sqrt()).collect();
    Ok(DiagSpectrum::new(sv)?.sorted_desc())
}
