//! Direction-of-arrival estimation for sub-connected hybrid analog/digital arrays.
//!
//! Three single-time-slot estimators resolve the phase ambiguity of the
//! subarray structure: Max-RP picks the sector with the largest received
//! power, Max-RP-QI refines it with a three-point quadratic fit, and
//! Root-MUSIC plus Max-RP-QI roots a subspace polynomial on a group of
//! zero-phase subarrays and uses the refined power peak to pick the alias.

pub mod array;
pub mod crlb;
mod error;
pub mod estimators;
pub mod exec;
pub mod harness;
pub mod numerics;
pub mod seed;

pub use error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
