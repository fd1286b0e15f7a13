use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined
    /// (Gamma poles, spectra touching 1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set the operation does not support.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A structural precondition was violated (ordering, lengths, m >= n).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A series stopped at its weight cap without meeting the tolerance.
    #[error("series not converged after weight {weight} (tail {tail:e})")]
    NotConverged { weight: usize, tail: f64 },

    /// A probability left [0, 1] by more than roundoff.
    #[error("accumulation error: value {value} outside [0, 1]")]
    Accumulation { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
