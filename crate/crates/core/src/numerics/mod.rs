//! Half-line quadrature, normalization constants and the discretized
//! eigensolver oracle.

mod normalization;
mod oracle;
mod quadrature;
mod tridiag;

pub use normalization::{norm_squared, normalization_constant, normalization_of};
pub use oracle::{fd_residual_norm, oracle_spectrum, Boundary, EigensolverSpec, Spectrum};
pub use quadrature::{integrate, integrate_halfline, QuadratureSpec};
pub use tridiag::Tridiagonal;
