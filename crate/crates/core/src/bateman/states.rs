//! Stationary states of the gauged Hamiltonian and residuals of the radial
//! Schrödinger equation.

use num_complex::Complex64;

use super::params::{energy, BatemanParams};
use crate::conformable::{derivative, second_derivative, Grid1D, SampledField};
use crate::error::{Error, Result};
use crate::polyexp::PolyExpSum;

/// Highest quantum number accepted by the Hermite recurrence.
pub const MAX_QUANTUM_NUMBER: usize = 50;

/// Coefficient of the `psi'/y` drift term in the radial equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KineticMode {
    /// `(1 + alpha) / y`, the literal drift coefficient.
    Paper,
    /// `(1 - alpha) / y`, from expanding `D^alpha D^alpha`.
    #[default]
    Derived,
}

impl KineticMode {
    pub fn drift(self, alpha: f64) -> f64 {
        match self {
            KineticMode::Paper => 1.0 + alpha,
            KineticMode::Derived => 1.0 - alpha,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KineticMode::Paper => "paper",
            KineticMode::Derived => "derived",
        }
    }
}

impl std::str::FromStr for KineticMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(KineticMode::Paper),
            "derived" => Ok(KineticMode::Derived),
            other => Err(Error::Domain(format!(
                "unknown kinetic mode '{other}' (expected paper|derived)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSource {
    Rodriguez,
    HermiteOracle,
}

/// A stationary state: quantum number, energy and (unnormalized) wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub n: usize,
    pub energy: f64,
    pub wavefunction: PolyExpSum,
    pub normalization: Option<f64>,
    pub source: StateSource,
}

impl Eigenstate {
    /// Rodriguez-formula state.
    pub fn rodriguez(p: &BatemanParams, n: usize) -> Result<Self> {
        Ok(Self {
            n,
            energy: energy(p, n)?,
            wavefunction: eigenfunction_rodriguez(p, n)?,
            normalization: None,
            source: StateSource::Rodriguez,
        })
    }

    /// Hermite-reduction state, expanded into a [`PolyExpSum`].
    pub fn hermite(p: &BatemanParams, n: usize) -> Result<Self> {
        Ok(Self {
            n,
            energy: energy(p, n)?,
            wavefunction: eigenfunction_hermite(p, n)?.to_polyexp()?,
            normalization: None,
            source: StateSource::HermiteOracle,
        })
    }

    pub fn with_normalization(mut self, b: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::Domain(format!(
                "normalization constant must be positive, got {b}"
            )));
        }
        self.normalization = Some(b);
        Ok(self)
    }

    pub fn normalization(&self) -> Result<f64> {
        self.normalization.ok_or(Error::Unnormalized(self.n))
    }

    /// `B_n psi_n` as a closed form.
    pub fn normalized_wavefunction(&self) -> Result<PolyExpSum> {
        Ok(self.wavefunction.scale_re(self.normalization()?))
    }
}

/// Unnormalized Rodriguez eigenfunction
/// `y^alpha exp(F y^(2alpha) / 2alpha) d^n/dy^n [y^(n-alpha) exp(-F y^(2alpha) / alpha)]`.
pub fn eigenfunction_rodriguez(p: &BatemanParams, n: usize) -> Result<PolyExpSum> {
    let a = p.alpha();
    let f = p.bound()?.f;
    let inner = PolyExpSum::term(1.0, n as f64 - a, -f / a, 2.0 * a)?;
    let prefactor = PolyExpSum::term(1.0, a, f / (2.0 * a), 2.0 * a)?;
    prefactor.multiply(&inner.differentiate_n(n))
}

/// Physicists' Hermite polynomials `(H_n, H_{n-1}, H_{n-2})` at `x`
/// (missing lower orders are zero).
pub fn hermite(n: usize, x: f64) -> (f64, f64, f64) {
    let (mut h2, mut h1, mut h0) = (0.0, 0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * h0 - 2.0 * k as f64 * h1;
        h2 = h1;
        h1 = h0;
        h0 = next;
    }
    (h0, h1, h2)
}

/// Power-basis coefficients of `H_n`, lowest degree first.
pub fn hermite_coefficients(n: usize) -> Vec<f64> {
    let mut prev: Vec<f64> = vec![];
    let mut cur = vec![1.0];
    for k in 0..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `y -> H_n(sqrt(F/alpha) y^alpha) exp(-F y^(2alpha) / 2alpha)`, the exact
/// eigenfunctions after substituting `z = y^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteState {
    pub n: usize,
    pub alpha: f64,
    /// `sqrt(F / alpha)`
    pub scale: f64,
    /// `F / (2 alpha)`
    pub decay: f64,
}

pub fn eigenfunction_hermite(p: &BatemanParams, n: usize) -> Result<HermiteState> {
    if n > MAX_QUANTUM_NUMBER {
        return Err(Error::QuantumNumberTooLarge {
            n,
            max: MAX_QUANTUM_NUMBER,
        });
    }
    let a = p.alpha();
    let f = p.bound()?.f;
    Ok(HermiteState {
        n,
        alpha: a,
        scale: (f / a).sqrt(),
        decay: f / (2.0 * a),
    })
}

impl HermiteState {
    pub fn value(&self, y: f64) -> f64 {
        let x = self.scale * y.powf(self.alpha);
        hermite(self.n, x).0 * (-self.decay * y.powf(2.0 * self.alpha)).exp()
    }

    /// `(psi, psi', psi'')` from the Hermite derivative identities.
    pub fn derivatives(&self, y: f64) -> (f64, f64, f64) {
        let (a, s, w) = (self.alpha, self.scale, self.decay);
        let n = self.n as f64;
        let x = s * y.powf(a);
        let x1 = s * a * y.powf(a - 1.0);
        let x2 = s * a * (a - 1.0) * y.powf(a - 2.0);
        let (h, hm1, hm2) = hermite(self.n, x);
        let dh = 2.0 * n * hm1;
        let ddh = 4.0 * n * (n - 1.0) * hm2;
        let u = h;
        let u1 = dh * x1;
        let u2 = ddh * x1 * x1 + dh * x2;

        let g = (-w * y.powf(2.0 * a)).exp();
        let e1 = -2.0 * a * w * y.powf(2.0 * a - 1.0);
        let e2 = -2.0 * a * w * (2.0 * a - 1.0) * y.powf(2.0 * a - 2.0);
        let g1 = e1 * g;
        let g2 = (e2 + e1 * e1) * g;

        (u * g, u1 * g + u * g1, u2 * g + 2.0 * u1 * g1 + u * g2)
    }

    pub fn to_polyexp(&self) -> Result<PolyExpSum> {
        let mut terms = PolyExpSum::zero();
        let mut sk = 1.0;
        for (k, c) in hermite_coefficients(self.n).into_iter().enumerate() {
            if c != 0.0 {
                let t = PolyExpSum::term(c * sk, k as f64 * self.alpha, -self.decay, 2.0 * self.alpha)?;
                terms = terms.add(&t);
            }
            sk *= self.scale;
        }
        Ok(terms)
    }
}

/// A radial function with analytic first and second derivatives.
pub trait RadialProfile {
    fn jet(&self, y: f64) -> Result<[Complex64; 3]>;
}

impl RadialProfile for HermiteState {
    fn jet(&self, y: f64) -> Result<[Complex64; 3]> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("radial profile needs y > 0, got {y}")));
        }
        let (v, d1, d2) = self.derivatives(y);
        Ok([v.into(), d1.into(), d2.into()])
    }
}

/// A [`PolyExpSum`] together with its exact first and second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticProfile {
    pub value: PolyExpSum,
    pub first: PolyExpSum,
    pub second: PolyExpSum,
}

impl AnalyticProfile {
    pub fn new(value: PolyExpSum) -> Self {
        let first = value.differentiate();
        let second = first.differentiate();
        Self { value, first, second }
    }
}

impl From<&PolyExpSum> for AnalyticProfile {
    fn from(e: &PolyExpSum) -> Self {
        Self::new(e.clone())
    }
}

impl RadialProfile for AnalyticProfile {
    fn jet(&self, y: f64) -> Result<[Complex64; 3]> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("radial profile needs y > 0, got {y}")));
        }
        Ok([
            self.value.evaluate(y)?,
            self.first.evaluate(y)?,
            self.second.evaluate(y)?,
        ])
    }
}

struct RadialCoefficients {
    drift: f64,
    k: f64,
    energy: f64,
    half_m_omega_sq: f64,
    two_a: f64,
}

impl RadialCoefficients {
    fn new(p: &BatemanParams, energy: f64, mode: KineticMode) -> Result<Self> {
        let d = p.derived()?;
        let a = p.alpha();
        Ok(Self {
            drift: mode.drift(a),
            k: 2.0 * p.mass_a() / (p.hbar_a() * p.hbar_a()),
            energy,
            half_m_omega_sq: 0.5 * p.mass_a() * d.omega_sq,
            two_a: 2.0 * a,
        })
    }

    fn residual(&self, y: f64, psi: Complex64, d1: Complex64, d2: Complex64) -> Complex64 {
        let potential =
            self.k * (self.energy * y.powf(self.two_a - 2.0) - self.half_m_omega_sq * y.powf(2.0 * self.two_a - 2.0));
        d2 + d1 * (self.drift / y) + psi * potential
    }
}

/// Pointwise left-hand side of
/// `psi'' + (c/y) psi' + (2 m^a / (y^2 hbar^2a)) (E y^2a - m^a Omega^2 y^4a / 2) psi`
/// with `c` selected by `mode`, using the profile's analytic derivatives.
pub fn schrodinger_residual(
    profile: &impl RadialProfile,
    p: &BatemanParams,
    energy: f64,
    mode: KineticMode,
    grid: &Grid1D,
) -> Result<SampledField> {
    let c = RadialCoefficients::new(p, energy, mode)?;
    let values = grid
        .points()
        .iter()
        .map(|&y| {
            let [v, d1, d2] = profile.jet(y)?;
            Ok(c.residual(y, v, d1, d2))
        })
        .collect::<Result<Vec<_>>>()?;
    SampledField::new(grid.clone(), values)
}

/// Same residual with derivatives taken by finite differences of samples.
pub fn schrodinger_residual_sampled(
    psi: &SampledField,
    p: &BatemanParams,
    energy: f64,
    mode: KineticMode,
) -> Result<SampledField> {
    let c = RadialCoefficients::new(p, energy, mode)?;
    let d1 = derivative(psi)?;
    let d2 = second_derivative(psi)?;
    let values = psi
        .grid()
        .points()
        .iter()
        .enumerate()
        .map(|(i, &y)| c.residual(y, psi.values()[i], d1.values()[i], d2.values()[i]))
        .collect();
    SampledField::new(psi.grid().clone(), values)
}
