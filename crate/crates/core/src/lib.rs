//! Nonreciprocal photon blockade in an asymmetric atom–cavity system with a
//! parametric-amplification pump.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only computation:
//!
//! - [`hilbert`]: truncated cavity ⊗ two-level-atom space and its elementary operators.
//! - [`model`]: the parameter set, drive-direction asymmetry and the Hamiltonians.
//! - [`amplitude`]: the weak-drive probability-amplitude method (ODE and closed form).
//! - [`lindblad`]: the master-equation Liouvillian, steady state, time evolution
//!   and photon statistics.
//! - [`blockade`]: optimal pump conditions, nonreciprocal ratio, blockade
//!   classification and the Poisson-deviation diagnostic.
//!
//! Every rate and detuning is measured in units of the total cavity decay κ.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod amplitude;
pub mod blockade;
mod error;
pub mod hilbert;
pub mod linalg;
pub mod lindblad;
pub mod model;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);
