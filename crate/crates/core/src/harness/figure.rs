use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ks::{ks_one_sample_sorted, Ecdf, KsReport};
use crate::densities::LargestGsvCdf;
use crate::error::{Error, Result};
use crate::sampler::{beta_manova_gsv, ManovaParams, RngStream};
use crate::spectrum::DiagSpectrum;

/// One row of the empirical-vs-analytic curve table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub empirical: f64,
    pub analytic: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureVerification {
    pub report: KsReport,
    pub curve: Vec<CurvePoint>,
    pub ecdf: Ecdf,
}

/// SHA-256 (hex) of the canonical JSON encoding of an experiment.
pub fn config_digest(params: &ManovaParams<f64>, n_samples: usize, grid: &[f64], alpha: f64, seed: u64) -> String {
    let canonical = serde_json::json!({
        "m": params.m,
        "n": params.n,
        "p": params.p,
        "beta": params.beta.beta(),
        "omega": params.omega.values(),
        "n_samples": n_samples,
        "grid": grid,
        "alpha": alpha,
        "seed": seed,
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

/// `count` independent spectra; draw `i` uses stream `i` of `seed`, so the
/// result does not depend on the thread count.
pub fn sample_gsv(params: &ManovaParams<f64>, count: usize, seed: u64) -> Result<Vec<DiagSpectrum<f64>>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| beta_manova_gsv(params, &mut RngStream::new(seed, i)))
        .collect()
}

pub fn sample_largest_gsv(params: &ManovaParams<f64>, count: usize, seed: u64) -> Result<Vec<f64>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| beta_manova_gsv(params, &mut RngStream::new(seed, i)).map(|c| c[0]))
        .collect()
}

/// Monte-Carlo largest values against the exact CDF: KS report plus a curve
/// table on `grid`.
pub fn verify_figure(
    params: &ManovaParams<f64>,
    n_samples: usize,
    grid: &[f64],
    alpha: f64,
    seed: u64,
) -> Result<FigureVerification> {
    if n_samples < 100 {
        return Err(Error::Precondition(format!("need at least 100 samples, got {n_samples}")));
    }
    let start = Instant::now();
    let largest = sample_largest_gsv(params, n_samples, seed)?;
    verify_largest(params, largest, grid, alpha, seed, start)
}

/// The same comparison for largest values drawn elsewhere, e.g. read back
/// from a `sample` file. `seed` only enters the digest.
pub fn verify_samples(
    params: &ManovaParams<f64>,
    largest: Vec<f64>,
    grid: &[f64],
    alpha: f64,
    seed: u64,
) -> Result<FigureVerification> {
    if largest.len() < 100 {
        return Err(Error::Precondition(format!("need at least 100 samples, got {}", largest.len())));
    }
    if largest.iter().any(|c| !(*c > 0.0 && *c < 1.0)) {
        return Err(Error::Domain("sampled values must lie in (0, 1)".into()));
    }
    verify_largest(params, largest, grid, alpha, seed, Instant::now())
}

fn verify_largest(
    params: &ManovaParams<f64>,
    largest: Vec<f64>,
    grid: &[f64],
    alpha: f64,
    seed: u64,
    start: Instant,
) -> Result<FigureVerification> {
    if grid.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Precondition("grid points must lie in [0, 1]".into()));
    }
    let n_samples = largest.len();
    let cdf = LargestGsvCdf::new(params)?;
    let ecdf = Ecdf::new(largest)?;
    let at_samples: Vec<f64> = ecdf
        .sorted_samples()
        .par_iter()
        .map(|&x| cdf.eval(x))
        .collect::<Result<_>>()?;
    let ks = ks_one_sample_sorted(&ecdf, &at_samples);
    let curve = grid
        .par_iter()
        .map(|&x| Ok(CurvePoint { x, empirical: ecdf.eval(x), analytic: cdf.eval(x)? }))
        .collect::<Result<Vec<_>>>()?;
    let digest = config_digest(params, n_samples, grid, alpha, seed);
    let report = KsReport::new(n_samples, ks, alpha, digest, start.elapsed().as_millis() as u64)?;
    Ok(FigureVerification { report, curve, ecdf })
}
