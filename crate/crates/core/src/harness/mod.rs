//! Monte-Carlo verification: empirical CDFs, Kolmogorov–Smirnov statistics,
//! the dense real-Gaussian oracle, the figure-reproduction experiments and
//! the special-function identity suite.

mod dense;
mod figure;
mod identities;
mod kaneko;
mod ks;

pub use dense::{dense_real_manova_gsv, DenseDraw, MAX_CONDITION};
pub use figure::{
    config_digest, sample_gsv, sample_largest_gsv, verify_figure, verify_samples, CurvePoint, FigureVerification,
};
pub use identities::{
    f10_series_check, f21_factorization_check, gauss_value_checks, jack_sum_rule_check, run_identity_suite,
    IdentityCheck, IdentitySuite, F10_GENERAL_CAPS, F10_RADIUS, F10_SCALAR_CAPS,
};
pub use kaneko::{kaneko_closed_form, kaneko_mc_check, KanekoCheck};
pub use ks::{ks_critical_value, ks_one_sample, ks_one_sample_sorted, ks_two_sample, ks_two_sample_critical, Ecdf, KsReport};
