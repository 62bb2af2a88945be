//! Classical trajectories, Hamiltonians and the gauge transformation.

use num_complex::Complex64;

use super::params::BatemanParams;
use crate::conformable::{conformable_derivative, conformable_second_derivative, Grid1D, SampledField};
use crate::error::{Error, Result};
use crate::polyexp::PolyExpSum;

/// Sign convention for the classical equation of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EomSign {
    /// `D D y + (lambda^2/4 - omega^2a) y = 0`: the opposite-sign convention.
    Paper,
    /// `D D y + (omega^2a - lambda^2/4) y = 0`, from the Euler-Lagrange steps.
    Derived,
}

/// `H(y, p)`; the gauged form drops the cross term and shifts the frequency.
pub fn hamiltonian_value(y: f64, momentum: f64, p: &BatemanParams, gauged: bool) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("Hamiltonian needs y > 0, got {y}")));
    }
    let a = p.alpha();
    let m = p.mass_a();
    let kinetic = momentum * momentum / (2.0 * m);
    let ya = y.powf(a);
    if gauged {
        let omega_sq = p.omega_2a() - p.damping * p.damping / 4.0;
        Ok(kinetic + 0.5 * m * omega_sq * ya * ya)
    } else {
        Ok(kinetic + 0.5 * m * p.omega_2a() * ya * ya + 0.5 * p.damping * ya * momentum)
    }
}

/// Sup-norm over `grid` of `eta (P + m^a lambda y^a / 2) eta^-1 phi - P phi`
/// with `P = -i hbar^a D^alpha_y` and
/// `eta = exp(i m^a lambda y^(2a) / (4 alpha hbar^a))`.
pub fn gauge_residual(test: &PolyExpSum, p: &BatemanParams, grid: &Grid1D) -> Result<f64> {
    let a = p.alpha();
    let (m, hb) = (p.mass_a(), p.hbar_a());
    let theta = PolyExpSum::term(m * p.damping / (4.0 * a * hb), 2.0 * a, 0.0, 1.0)?;
    let d_theta = theta.conformable_diff(p.order);
    let d_phi = test.conformable_diff(p.order);
    let i = Complex64::i();

    let mut worst = 0.0f64;
    for &y in grid.points() {
        let phi = test.evaluate(y)?;
        let dphi = d_phi.evaluate(y)?;
        let th = theta.evaluate(y)?.re;
        let dth = d_theta.evaluate(y)?.re;

        let eta = Complex64::from_polar(1.0, th);
        let eta_inv = Complex64::from_polar(1.0, -th);
        let d_eta_inv = -i * dth * eta_inv;
        let p_of = -i * hb * (d_eta_inv * phi + eta_inv * dphi);
        let shifted = p_of + 0.5 * m * p.damping * y.powf(a) * eta_inv * phi;
        let lhs = eta * shifted;
        let rhs = -i * hb * dphi;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Pointwise `D^a_t D^a_t y + c y` along a sampled trajectory.
pub fn classical_el_residual(traj: &SampledField, p: &BatemanParams, sign: EomSign) -> Result<SampledField> {
    let c = p.omega_2a() - p.damping * p.damping / 4.0;
    let c = match sign {
        EomSign::Paper => -c,
        EomSign::Derived => c,
    };
    let dd = conformable_second_derivative(traj, p.order)?;
    dd.zip_with(traj, |d, y| d + y * c)
}

/// `P = m^a D^a_t y - m^a lambda y / 2` along a sampled trajectory.
pub fn canonical_momentum(traj: &SampledField, p: &BatemanParams) -> Result<SampledField> {
    let m = p.mass_a();
    let d = conformable_derivative(traj, p.order)?;
    d.zip_with(traj, |dy, y| dy * m - y * (0.5 * m * p.damping))
}

/// `cos(Omega t^a / a)`: the oscillating solution of the derived-sign equation.
pub fn oscillating_trajectory(p: &BatemanParams, grid: &Grid1D) -> Result<SampledField> {
    let w = p.derived()?.omega_eff;
    let a = p.alpha();
    SampledField::from_real_fn(grid.clone(), |t| (w * t.powf(a) / a).cos())
}

/// `exp(Omega t^a / a)`: the growing solution of the opposite-sign equation.
pub fn growing_trajectory(p: &BatemanParams, grid: &Grid1D) -> Result<SampledField> {
    let w = p.derived()?.omega_eff;
    let a = p.alpha();
    SampledField::from_real_fn(grid.clone(), |t| (w * t.powf(a) / a).exp())
}
