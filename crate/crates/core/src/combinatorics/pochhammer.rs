use crate::error::{Error, Result};
use crate::scalar::{Field, Real};

use super::Partition;

/// The ensemble parameter β together with α = 2/β.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaParam<T> {
    beta: T,
    alpha: T,
}

impl<T: Field> BetaParam<T> {
    pub fn new(beta: T) -> Result<Self> {
        if !(beta > T::zero()) {
            return Err(Error::Parameter(format!("beta must be positive, got {beta:?}")));
        }
        let alpha = T::from_int(2) / beta.clone();
        Ok(Self { beta, alpha })
    }

    pub fn beta(&self) -> T {
        self.beta.clone()
    }

    pub fn alpha(&self) -> T {
        self.alpha.clone()
    }

    pub fn half_beta(&self) -> T {
        self.beta.clone() / T::from_int(2)
    }
}

/// Factor contributed by cell (`row`, `col`) (both 0-based) to `(a)_κ`:
/// `a - row·β/2 + col`.
pub fn pochhammer_cell<T: Field>(a: &T, beta: &BetaParam<T>, row: usize, col: usize) -> T {
    a.clone() - T::from_int(row as i64) * beta.half_beta() + T::from_int(col as i64)
}

/// Generalized Pochhammer symbol `(a)_κ^{(β)}`, as an exact product.
pub fn gen_pochhammer<T: Field>(a: &T, kappa: &Partition, beta: &BetaParam<T>) -> T {
    let mut acc = T::one();
    for (row, &len) in kappa.parts().iter().enumerate() {
        for col in 0..len {
            acc = acc * pochhammer_cell(a, beta, row, col);
        }
    }
    acc
}

/// `sign · exp(ln_abs)`; `sign == 0` encodes an exact zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog<T> {
    pub ln_abs: T,
    pub sign: i8,
}

impl<T: Real> SignedLog<T> {
    pub fn value(&self) -> T {
        match self.sign {
            0 => T::zero(),
            s => T::from_i8(s).unwrap() * self.ln_abs.exp(),
        }
    }
}

/// Log-magnitude and sign of `(a)_κ^{(β)}`, safe for large weights.
pub fn log_gen_pochhammer<T: Real>(a: T, kappa: &Partition, beta: &BetaParam<T>) -> SignedLog<T> {
    let mut ln_abs = T::zero();
    let mut sign = 1i8;
    for (row, &len) in kappa.parts().iter().enumerate() {
        for col in 0..len {
            let f = pochhammer_cell(&a, beta, row, col);
            if f == T::zero() {
                return SignedLog {
                    ln_abs: T::neg_infinity(),
                    sign: 0,
                };
            }
            if f < T::zero() {
                sign = -sign;
            }
            ln_abs += f.abs().ln();
        }
    }
    SignedLog { ln_abs, sign }
}
