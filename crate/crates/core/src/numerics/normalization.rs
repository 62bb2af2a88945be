use crate::bateman::{eigenfunction_rodriguez, BatemanParams, Eigenstate};
use crate::error::{Error, Result};
use crate::polyexp::PolyExpSum;

use super::quadrature::{integrate_halfline, QuadratureSpec};

/// `int_0^infinity |psi(y)|^2 dy`.
pub fn norm_squared(psi: &PolyExpSum, spec: &QuadratureSpec) -> Result<f64> {
    let density = |y: f64| {
        if y <= 0.0 {
            // the integrator never samples the endpoint itself
            return 0.0;
        }
        psi.evaluate(y).map(|v| v.norm_sqr()).unwrap_or(f64::NAN)
    };
    integrate_halfline(density, spec)
}

/// `B = (int |psi|^2)^(-1/2)`.
pub fn normalization_of(psi: &PolyExpSum, spec: &QuadratureSpec) -> Result<f64> {
    let n2 = norm_squared(psi, spec)?;
    if !(n2 > 0.0 && n2.is_finite()) {
        return Err(Error::Quadrature(format!(
            "norm integral is {n2}; state cannot be normalized"
        )));
    }
    Ok(n2.sqrt().recip())
}

/// `B_n` of the Rodriguez eigenfunction, fixed by `int rho(y, 0+) dy = 1`.
pub fn normalization_constant(p: &BatemanParams, n: usize, spec: &QuadratureSpec) -> Result<f64> {
    normalization_of(&eigenfunction_rodriguez(p, n)?, spec)
}

impl Eigenstate {
    /// Attaches the quadrature normalization constant.
    pub fn normalized(self, spec: &QuadratureSpec) -> Result<Self> {
        let b = normalization_of(&self.wavefunction, spec)?;
        self.with_normalization(b)
    }
}
