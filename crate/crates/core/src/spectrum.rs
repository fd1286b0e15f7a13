use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Diagonal of a diagonal matrix (equivalently, a real spectrum).
///
/// No ordering or sign is imposed here; callers that need positivity or a
/// strict order check it themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagSpectrum<T> {
    values: Vec<T>,
}

impl<T: Real> DiagSpectrum<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("spectrum must be non-empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("spectrum entries must be finite".into()));
        }
        Ok(Self { values })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity spectrum needs n >= 1");
        Self {
            values: vec![T::one(); n],
        }
    }

    pub fn constant(n: usize, v: T) -> Self {
        assert!(n > 0, "constant spectrum needs n >= 1");
        Self { values: vec![v; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.values.iter()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    pub fn trace(&self) -> T {
        self.values.iter().copied().sum()
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    /// Elementwise map; the result must stay finite.
    pub fn map(&self, f: impl FnMut(T) -> T) -> Result<Self> {
        Self::new(self.values.iter().copied().map(f).collect())
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    /// Copy sorted in descending order.
    pub fn sorted_desc(&self) -> Self {
        let mut values = self.values.clone();
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
        Self { values }
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }

    /// True when every entry equals the first one.
    pub fn is_scalar(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }
}

impl<T> Index<usize> for DiagSpectrum<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}
