//! Conformable-derivative quantization of the Bateman damped harmonic
//! oscillator.
//!
//! The crate provides the closed-form spectrum and Rodriguez eigenfunctions,
//! probability densities and currents, and independent numerical oracles
//! (Hermite reduction, a tridiagonal eigensolver, half-line quadrature) that
//! cross-check every closed form.
//!
//! ```
//! use conformable_bateman::bateman::{energy, BatemanParams, Eigenstate};
//! use conformable_bateman::numerics::QuadratureSpec;
//!
//! // m = omega = hbar = 1, lambda = 0.5, alpha = 0.9
//! let p = BatemanParams::new(1.0, 1.0, 0.5, 1.0, 0.9)?;
//! let ground = Eigenstate::rodriguez(&p, 0)?.normalized(&QuadratureSpec::default())?;
//! assert_eq!(ground.energy, energy(&p, 0)?);
//! println!("psi_0 = {}", ground.normalized_wavefunction()?);
//! # Ok::<(), conformable_bateman::Error>(())
//! ```

// `!(x > 0.0)` is used deliberately so that NaN falls on the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bateman;
pub mod cli;
pub mod conformable;
pub mod density;
pub mod error;
pub mod numerics;
pub mod polyexp;

pub use conformable::{FractionalOrder, Grid1D, SampledField};
pub use error::{Error, Result};
pub use polyexp::{PolyExpSum, PolyExpTerm};
