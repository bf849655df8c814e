//! Numerical kernels used by the subspace stage: sample covariance,
//! Hermitian eigendecomposition and complex polynomial rooting.

mod covariance;
mod evd;
mod roots;

pub use covariance::{sample_covariance, HermitianMatrix};
pub use evd::{hermitian_evd, EigenPair};
pub use roots::{aberth_roots, poly_eval, poly_from_roots, poly_roots};
