use crate::conformable::FractionalOrder;
use crate::error::{Error, Result};

/// Physical inputs of the conformable Bateman oscillator.
///
/// `mass`, `omega` and `hbar` enter raised to powers of the order, i.e. as
/// `m^alpha`, `omega^(2 alpha)` and `hbar^alpha`; `damping` is the bare
/// rate `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatemanParams {
    pub mass: f64,
    pub omega: f64,
    pub damping: f64,
    pub hbar: f64,
    pub order: FractionalOrder,
}

/// Quantities derived from [`BatemanParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// `Omega^2 = omega^(2 alpha) - lambda^2 / 4`
    pub omega_sq: f64,
    pub omega_eff: f64,
    /// `F = (m^alpha / hbar^alpha) Omega`
    pub f: f64,
}

impl BatemanParams {
    pub fn new(mass: f64, omega: f64, damping: f64, hbar: f64, alpha: f64) -> Result<Self> {
        let p = Self {
            mass,
            omega,
            damping,
            hbar,
            order: FractionalOrder::new(alpha)?,
        };
        p.validate()?;
        Ok(p)
    }

    /// `m = omega = hbar = 1`, no damping.
    pub fn unit(alpha: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 0.0, 1.0, alpha)
    }

    /// Unit mass and `hbar`, no damping, with `omega` chosen so that `F = target`.
    pub fn with_unit_f(alpha: f64, target: f64) -> Result<Self> {
        // F = omega^alpha when m = hbar = 1 and lambda = 0
        Self::new(1.0, target.powf(1.0 / alpha), 0.0, 1.0, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("mass", self.mass)?;
        positive("omega", self.omega)?;
        positive("hbar", self.hbar)?;
        if !(self.damping.is_finite() && self.damping >= 0.0) {
            return Err(Error::Domain(format!(
                "damping must be non-negative and finite, got {}",
                self.damping
            )));
        }
        self.derived().map(|_| ())
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.order.value()
    }

    /// `m^alpha`
    pub fn mass_a(&self) -> f64 {
        self.mass.powf(self.alpha())
    }

    /// `hbar^alpha`
    pub fn hbar_a(&self) -> f64 {
        self.hbar.powf(self.alpha())
    }

    /// `omega^(2 alpha)`
    pub fn omega_2a(&self) -> f64 {
        self.omega.powf(2.0 * self.alpha())
    }

    /// Rejects the overdamped regime `lambda > 2 omega^alpha`.
    pub fn derived(&self) -> Result<DerivedParams> {
        let omega_sq = self.omega_2a() - self.damping * self.damping / 4.0;
        if omega_sq < 0.0 {
            return Err(Error::Overdamped {
                lambda: self.damping,
                limit: 2.0 * self.omega.powf(self.alpha()),
            });
        }
        let omega_eff = omega_sq.sqrt();
        Ok(DerivedParams {
            omega_sq,
            omega_eff,
            f: self.mass_a() / self.hbar_a() * omega_eff,
        })
    }

    /// Like [`derived`](Self::derived) but also rejects critical damping.
    pub fn bound(&self) -> Result<DerivedParams> {
        let d = self.derived()?;
        if d.omega_sq > 0.0 {
            Ok(d)
        } else {
            Err(Error::CriticalDamping)
        }
    }
}

/// Free-function form of [`BatemanParams::derived`].
pub fn derived_params(p: &BatemanParams) -> Result<DerivedParams> {
    p.derived()
}

/// `E_n = alpha hbar^alpha Omega (n + 1/2)`.
pub fn energy(p: &BatemanParams, n: usize) -> Result<f64> {
    let d = p.derived()?;
    Ok(p.alpha() * p.hbar_a() * d.omega_eff * (n as f64 + 0.5))
}

/// Level spacing `alpha hbar^alpha Omega`.
pub fn level_spacing(p: &BatemanParams) -> Result<f64> {
    let d = p.derived()?;
    Ok(p.alpha() * p.hbar_a() * d.omega_eff)
}
