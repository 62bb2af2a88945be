//! Extended Nikiforov-Uvarov reduction specialized to the Bateman radial
//! equation.
//!
//! With `sigma_f = y`, the choices `A = alpha/2`, `B = S = P = 0` and the
//! decaying branch of `pi_f` give `pi_f = -F y^(2alpha)` and
//! `G = Q y^(2alpha-1)`, where `Q = 2 m^a E / hbar^(2a) + B^2 + 2 A F`.
//! Matching the `y^(2alpha-1)` coefficients of `h = pi_f' + G` and
//! `h_n = -(n/2) tau' - n(n-1)/6 sigma_f'' + C_n` fixes `E`; matching the
//! constant parts fixes `C_n`.

use super::params::BatemanParams;
use crate::error::{Error, Result};
use crate::polyexp::PolyExpSum;

#[derive(Debug, Clone, PartialEq)]
pub struct EnuSolution {
    pub n: usize,
    pub a: f64,
    /// Coefficient of `y^(2alpha-1)` in `G`, evaluated at the solved energy.
    pub q: f64,
    pub c_n: f64,
    pub pi_f: PolyExpSum,
    pub tau: PolyExpSum,
    pub h: PolyExpSum,
    pub h_n: PolyExpSum,
    pub energy: f64,
}

fn real_coefficient(e: &PolyExpSum, power: f64) -> f64 {
    e.coefficient(power, 0.0, 1.0).re
}

pub fn enu_pipeline(p: &BatemanParams, n: usize) -> Result<EnuSolution> {
    let alpha = p.alpha();
    let f = p.bound()?.f;
    let two_a = 2.0 * alpha;
    let nf = n as f64;

    let a = alpha / 2.0;
    let b = 0.0;

    // pi_f = alpha/2 - (A + B y^alpha + F y^(2alpha))
    let pi_f = PolyExpSum::constant(alpha / 2.0 - a)
        .add(&PolyExpSum::term(-b, alpha, 0.0, 1.0)?)
        .add(&PolyExpSum::term(-f, two_a, 0.0, 1.0)?);
    let sigma_f = PolyExpSum::term(1.0, 1.0, 0.0, 1.0)?;
    let tau = PolyExpSum::constant(1.0 - 2.0 * a).add(&PolyExpSum::term(-2.0 * f, two_a, 0.0, 1.0)?);

    let h_n_shape = tau
        .differentiate()
        .scale_re(-nf / 2.0)
        .add(&sigma_f.differentiate_n(2).scale_re(-nf * (nf - 1.0) / 6.0));

    // G = Q y^(2alpha-1) with Q = k E + q0
    let k = 2.0 * p.mass_a() / (p.hbar_a() * p.hbar_a());
    let q0 = b * b + 2.0 * a * f;
    let pi_f_prime = pi_f.differentiate();

    let target = two_a - 1.0;
    let c_hn = real_coefficient(&h_n_shape, target);
    let c_pi = real_coefficient(&pi_f_prime, target);
    let energy = (c_hn - c_pi - q0) / k;
    if !energy.is_finite() {
        return Err(Error::Domain(
            "coefficient matching produced a non-finite energy".into(),
        ));
    }
    let q = k * energy + q0;

    let h = pi_f_prime.add(&PolyExpSum::term(q, target, 0.0, 1.0)?);
    let c_n = real_coefficient(&h, 0.0) - real_coefficient(&h_n_shape, 0.0);
    let h_n = h_n_shape.add(&PolyExpSum::constant(c_n));

    Ok(EnuSolution {
        n,
        a,
        q,
        c_n,
        pi_f,
        tau,
        h,
        h_n,
        energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bateman::params::energy;

    #[test]
    fn ground_state_energy() {
        for a in [0.5, 0.8, 1.0] {
            let p = BatemanParams::new(1.0, 1.0, 0.3, 1.0, a).unwrap();
            let s = enu_pipeline(&p, 0).unwrap();
            let e = energy(&p, 0).unwrap();
            assert!((s.energy - e).abs() <= 1e-15 * e, "{} vs {}", s.energy, e);
        }
    }

    #[test]
    fn unit_third_level() {
        let p = BatemanParams::unit(1.0).unwrap();
        assert_eq!(enu_pipeline(&p, 3).unwrap().energy, 3.5);
    }

    #[test]
    fn tau_derivative() {
        let (a, f) = (0.85, 1.3);
        let p = BatemanParams::with_unit_f(a, f).unwrap();
        let s = enu_pipeline(&p, 2).unwrap();
        let d = s.tau.differentiate();
        assert_eq!(d.len(), 1);
        let t = d.terms()[0];
        assert!((t.power - (2.0 * a - 1.0)).abs() < 1e-15);
        assert!((t.coeff.re + 4.0 * a * f).abs() < 1e-12);
    }

    #[test]
    fn h_matches_h_n() {
        let p = BatemanParams::new(1.3, 0.9, 0.4, 0.8, 0.9).unwrap();
        for n in 0..8 {
            let s = enu_pipeline(&p, n).unwrap();
            assert!(s.h.sub(&s.h_n).is_zero(), "n={n}: {} vs {}", s.h, s.h_n);
            assert_eq!(s.c_n, 0.0);
            let e = energy(&p, n).unwrap();
            assert!((s.energy - e).abs() <= 1e-14 * e);
        }
    }

    #[test]
    fn rejects_unbound() {
        let p = BatemanParams::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert!(enu_pipeline(&p, 0).is_err());
    }
}
