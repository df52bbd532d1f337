//! Complex matrix-variate Dirichlet averages.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: Hermitian matrices, Cholesky, eigenvalues, inverse square roots.
//! * [`special`]: complex matrix gamma, generalized Pochhammer symbols, partitions,
//!   Schur and zonal polynomials, `1F1` of a matrix argument, power means.
//! * [`measures`]: seeded samplers for the complex matrix gamma law and the
//!   type-1, type-2 and rectangular (`p = 1`) Dirichlet measures.
//! * [`averages`]: closed forms for the normalizing constants and the Dirichlet
//!   averages of determinant powers, complement powers, exponential traces and
//!   Hermitian-form moments.
//! * [`harness`]: Monte Carlo estimation, the verification suite and reports.
//! * [`cli`]: the `mvda` command-line front end.

pub mod averages;
pub mod cli;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod measures;
pub mod special;

pub use error::{Error, Result};
pub use linalg::{ComplexScalar, HermitianMatrix, LowerTriangularFactor};
