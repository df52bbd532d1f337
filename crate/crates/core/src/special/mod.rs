//! Special functions of scalar and Hermitian matrix argument.

mod gamma;
mod hyp1f1;
mod partition;
mod pochhammer;
mod power_mean;
mod schur;

pub use gamma::{gamma_p_ln, ln_gamma, ln_gamma_p, GammaPArgs};
pub use hyp1f1::{hyp1f1_eigenvalues, hyp1f1_matrix, Hyp1f1Result, TruncationPolicy};
pub use partition::{partitions_of, Partition};
pub use pochhammer::{pochhammer, pochhammer_gen, pochhammer_ratio};
pub use power_mean::power_mean;
pub use schur::{complete_homogeneous, schur_eval, zonal_c, zonal_c_eigenvalues};
