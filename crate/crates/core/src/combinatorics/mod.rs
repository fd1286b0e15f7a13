//! Partitions, generalized Pochhammer symbols, generalized Gamma functions
//! and the Wishart normalization constant.

mod gamma;
mod partition;
mod pochhammer;

pub use gamma::{ln_gamma, log_gauss_2f1_identity, log_gen_gamma, log_k_constant};
pub use partition::{partitions_of, partitions_up_to, subpartitions, Partition};
pub use pochhammer::{gen_pochhammer, log_gen_pochhammer, pochhammer_cell, BetaParam, SignedLog};
