//! χ variates, the recursive β-Wishart singular-value sampler and the
//! β-MANOVA generalized-singular-value sampler.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Open01, StandardNormal};

use crate::combinatorics::BetaParam;
use crate::error::{Error, Result};
use crate::linalg::arrow_singular_values;
use crate::scalar::Real;
use crate::spectrum::DiagSpectrum;

/// Reproducible random stream: identical `(seed, stream_id)` pairs yield
/// identical variate sequences. Disjoint stream ids are independent.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Scalars the samplers can draw.
pub trait SampleReal: Real {
    /// Gamma(shape, scale) draw; `shape` and `scale` positive.
    fn gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self;
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self;
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

macro_rules! impl_sample_real {
    ($t:ty) => {
        impl SampleReal for $t {
            fn gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self {
                Gamma::new(shape, scale).expect("positive gamma parameters").sample(rng)
            }

            fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self {
                Open01.sample(rng)
            }

            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }
        }
    };
}

impl_sample_real!(f32);
impl_sample_real!(f64);

/// One draw from the χ distribution with `dof > 0` degrees of freedom.
///
/// Shapes below one use `G(k+1)·U^{1/k}` in log space so tiny degrees of
/// freedom do not underflow; results below the smallest positive normal
/// float are clamped to it.
pub fn chi_sample<T: SampleReal, R: Rng + ?Sized>(dof: T, rng: &mut R) -> Result<T> {
    if !(dof > T::zero()) || !dof.is_finite() {
        return Err(Error::Parameter(format!("chi degrees of freedom must be positive, got {dof}")));
    }
    let two = T::lit(2.0);
    let shape = dof / two;
    if shape >= T::one() {
        return Ok(T::gamma(shape, two, rng).sqrt());
    }
    let g = T::gamma(shape + T::one(), two, rng);
    let u = T::open01(rng);
    let ln_chi = (g.ln() + u.ln() / shape) / two;
    Ok(ln_chi.exp().max(T::min_positive_value()))
}

/// Singular values of the recursive β-Wishart model with diagonal covariance
/// `d`, sorted descending.
pub fn beta_wishart_sv<T: SampleReal, R: Rng + ?Sized>(
    m: usize,
    n: usize,
    beta: &BetaParam<T>,
    d: &DiagSpectrum<T>,
    rng: &mut R,
) -> Result<DiagSpectrum<T>> {
    if n == 0 || m < n {
        return Err(Error::Precondition(format!("Wishart sampler needs m >= n >= 1, got m={m}, n={n}")));
    }
    if d.len() != n || d.iter().any(|&v| !(v > T::zero())) {
        return Err(Error::Precondition(format!("covariance must have {n} positive entries")));
    }
    let b = beta.beta();
    let scale0 = d[0].sqrt();
    let mut sigma = DiagSpectrum::new(vec![chi_sample(T::from_usize_lossy(m) * b, rng)? * scale0])?;
    for k in 2..=n {
        let scale = d[k - 1].sqrt();
        let mut col = Vec::with_capacity(k - 1);
        for _ in 0..k - 1 {
            col.push(chi_sample(b, rng)? * scale);
        }
        let corner = chi_sample(T::from_usize_lossy(m - k + 1) * b, rng)? * scale;
        sigma = arrow_singular_values(sigma.values(), &col, corner)?;
    }
    Ok(sigma)
}

/// Parameters of the β-MANOVA ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct ManovaParams<T> {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub beta: BetaParam<T>,
    pub omega: DiagSpectrum<T>,
}

impl<T: Real> ManovaParams<T> {
    pub fn new(m: usize, n: usize, p: usize, beta: T, omega: Vec<T>) -> Result<Self> {
        if n == 0 || m < n || p < n {
            return Err(Error::Precondition(format!("need m, p >= n >= 1, got m={m}, n={n}, p={p}")));
        }
        let omega = DiagSpectrum::new(omega)?;
        if omega.len() != n {
            return Err(Error::Precondition(format!("omega needs {n} entries, got {}", omega.len())));
        }
        if omega.iter().any(|&w| !(w > T::zero())) {
            return Err(Error::Precondition("omega entries must be positive".into()));
        }
        Ok(Self {
            m,
            n,
            p,
            beta: BetaParam::new(beta)?,
            omega,
        })
    }

    /// `t = (m - n + 1)β/2 - 1` when it is a nonnegative integer.
    pub fn truncation_order(&self) -> Option<usize> {
        let t = T::from_usize_lossy(self.m - self.n + 1) * self.beta.half_beta() - T::one();
        let r = t.round();
        (r >= T::zero() && (t - r).abs() <= T::lit(1e-10) * T::one().max(t.abs()))
            .then(|| r.to_usize())
            .flatten()
    }
}

/// Generalized singular values `c₁ > … > cₙ` of the β-MANOVA ensemble.
///
/// `Λ` are the squared singular values of `BetaWishart(m, n, β, Ω²)`, `M` the
/// reciprocals of the squared singular values of `BetaWishart(p, n, β, Λ⁻¹)`,
/// and `C = (M + I)^{-1/2}`.
pub fn beta_manova_gsv<T: SampleReal, R: Rng + ?Sized>(params: &ManovaParams<T>, rng: &mut R) -> Result<DiagSpectrum<T>> {
    let omega_sq = params.omega.map(|w| w * w)?;
    let sigma = beta_wishart_sv(params.m, params.n, &params.beta, &omega_sq, rng)?;
    let lambda_inv = sigma.map(|s| T::one() / (s * s))?;
    let tau = beta_wishart_sv(params.p, params.n, &params.beta, &lambda_inv, rng)?;
    let c = tau.map(|t| {
        let m = T::one() / (t * t);
        T::one() / (m + T::one()).sqrt()
    })?;
    Ok(c.sorted_desc())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rng_stream_is_reproducible_and_streams_differ() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        let mut c = RngStream::new(7, 4);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn chi_rejects_bad_dof() {
        let mut rng = RngStream::new(1, 0);
        assert!(chi_sample(0.0, &mut rng).is_err());
        assert!(chi_sample(-2.0, &mut rng).is_err());
    }

    #[test]
    fn tiny_dof_draws_are_positive() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..20_000 {
            let x: f64 = chi_sample(1e-2, &mut rng).unwrap();
            assert!(x > 0.0 && x.is_finite());
        }
    }

    #[test]
    fn manova_params_validation() {
        assert!(ManovaParams::new(3, 4, 5, 1.0, vec![1.0; 4]).is_err());
        assert!(ManovaParams::new(5, 4, 3, 1.0, vec![1.0; 4]).is_err());
        assert!(ManovaParams::new(5, 2, 3, 1.0, vec![1.0, 0.0]).is_err());
        assert!(ManovaParams::new(5, 2, 3, 1.0, vec![1.0]).is_err());
        let fig1 = ManovaParams::new(7, 4, 5, 2.5, vec![1.0, 2.0, 2.5, 2.7]).unwrap();
        assert_eq!(fig1.truncation_order(), Some(4));
        let fig2 = ManovaParams::new(9, 4, 6, 3.0, vec![1.0, 2.0, 2.5, 2.7]).unwrap();
        assert_eq!(fig2.truncation_order(), Some(8));
        let off = ManovaParams::new(7, 4, 5, 1.1, vec![1.0; 4]).unwrap();
        assert_eq!(off.truncation_order(), None);
    }

    #[test]
    fn outputs_have_the_right_support() {
        let params = ManovaParams::new(7, 4, 5, 2.5, vec![1.0, 2.0, 2.5, 2.7]).unwrap();
        for s in 0..200 {
            let mut rng = RngStream::new(5, s);
            let c = beta_manova_gsv(&params, &mut rng).unwrap();
            assert!(c.is_strictly_decreasing());
            assert!(c.iter().all(|&v| v > 0.0 && v < 1.0));
            let d = DiagSpectrum::new(vec![0.5, 2.0, 1.0]).unwrap();
            let w = beta_wishart_sv(4, 3, &BetaParam::new(0.7).unwrap(), &d, &mut rng).unwrap();
            assert!(w.is_strictly_decreasing() && w.min() > 0.0);
        }
    }
}
