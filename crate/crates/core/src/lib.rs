#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` also rejects NaN

pub mod combinatorics;
pub mod densities;
pub mod error;
pub mod harness;
pub mod jack;
pub mod linalg;
pub mod mhg;
pub mod sampler;
pub mod scalar;
pub mod spectrum;

pub use combinatorics::{BetaParam, Partition};
pub use error::{Error, Result};
pub use densities::{cdf_largest_gsv, cdf_largest_gsv_2f1, jacobi_logdensity, joint_gsv_logdensity, GsvPoint, KernelRoute, LargestGsvCdf};
pub use harness::{verify_figure, Ecdf, KsReport};
pub use jack::{jack_c, JackPlan, JackTable};
pub use mhg::{hyper_pq, HypergeometricSeries, SeriesControl, SeriesResult};
pub use sampler::{beta_manova_gsv, beta_wishart_sv, ManovaParams, RngStream};
pub use scalar::{Field, Real};
pub use spectrum::DiagSpectrum;

pub type BetaParam64 = BetaParam<f64>;
pub type DiagSpectrum64 = DiagSpectrum<f64>;
pub type ManovaParams64 = ManovaParams<f64>;
pub type GsvPoint64 = GsvPoint<f64>;
pub type LargestGsvCdf64 = LargestGsvCdf<f64>;
pub type SeriesControl64 = SeriesControl<f64>;
