//! Probability density, probability current and the continuity equation
//! for damped stationary states.
//!
//! For a stationary state the density separates as
//! `rho(y, t) = B_n^2 |psi_n(y)|^2 exp(-lambda t^alpha / 2)`; the current is
//! `j = (hbar^a / 2i m^a)(psi* D psi - psi D psi*) e(t) + (lambda/2) y^a rho`.

use num_complex::Complex64;

use crate::bateman::{BatemanParams, Eigenstate};
use crate::conformable::{conformable_derivative, Grid1D, SampledField};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::polyexp::PolyExpSum;

/// Which wavefunction the current is evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    /// The gauge-transformed state `psi` as stored.
    #[default]
    Gauged,
    /// `eta^-1 psi`, with the gauge phase restored.
    Original,
}

impl std::str::FromStr for Frame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauged" => Ok(Frame::Gauged),
            "original" => Ok(Frame::Original),
            other => Err(Error::Domain(format!(
                "unknown frame '{other}' (expected gauged|original)"
            ))),
        }
    }
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Gauged => "gauged",
            Frame::Original => "original",
        }
    }
}

/// Time dependence of the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DampingExponent {
    /// `exp(-lambda t^alpha / 2)`
    #[default]
    Literal,
    /// `exp(-lambda t^alpha / (2 alpha))`
    OverAlpha,
}

impl DampingExponent {
    pub fn factor(self, lambda: f64, alpha: f64, t: f64) -> f64 {
        (self.rate(lambda, alpha) / alpha * t.powf(alpha)).exp()
    }

    /// `r` with `D^alpha_t factor = r * factor`.
    pub fn rate(self, lambda: f64, alpha: f64) -> f64 {
        match self {
            DampingExponent::Literal => -lambda * alpha / 2.0,
            DampingExponent::OverAlpha => -lambda / 2.0,
        }
    }
}

/// Real values on a `(y, t)` product grid, stored one `t` row at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    y: Grid1D,
    t: Grid1D,
    values: Vec<f64>,
}

impl Field2D {
    pub fn new(y: Grid1D, t: Grid1D, values: Vec<f64>) -> Result<Self> {
        let expected = y.len() * t.len();
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { y, t, values })
    }

    pub fn y(&self) -> &Grid1D {
        &self.y
    }

    pub fn t(&self) -> &Grid1D {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, yi: usize, ti: usize) -> f64 {
        self.values[ti * self.y.len() + yi]
    }

    /// All `y` values at time index `ti`.
    pub fn row(&self, ti: usize) -> &[f64] {
        let ny = self.y.len();
        &self.values[ti * ny..(ti + 1) * ny]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub field: Field2D,
    pub n: usize,
    pub params: BatemanParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentField {
    pub field: Field2D,
    pub n: usize,
    pub frame: Frame,
}

fn outer(y: &Grid1D, t: &Grid1D, profile: &[f64], time: impl Fn(f64) -> f64) -> Result<Field2D> {
    let values = t
        .points()
        .iter()
        .flat_map(|&tt| {
            let f = time(tt);
            profile.iter().map(move |&v| v * f)
        })
        .collect();
    Field2D::new(y.clone(), t.clone(), values)
}

/// `B_n^2 |psi_n(y)|^2`: the `t -> 0+` slice, where the damping factor is 1.
pub fn initial_density(state: &Eigenstate, y: &Grid1D) -> Result<Vec<f64>> {
    let psi = state.normalized_wavefunction()?;
    y.points().iter().map(|&v| Ok(psi.evaluate(v)?.norm_sqr())).collect()
}

/// `rho(y, t) = B_n^2 |psi_n(y)|^2 exp(-lambda t^alpha / 2)`.
pub fn probability_density(state: &Eigenstate, p: &BatemanParams, y: &Grid1D, t: &Grid1D) -> Result<DensityField> {
    probability_density_with(state, p, y, t, DampingExponent::Literal)
}

pub fn probability_density_with(
    state: &Eigenstate,
    p: &BatemanParams,
    y: &Grid1D,
    t: &Grid1D,
    damping: DampingExponent,
) -> Result<DensityField> {
    let profile = initial_density(state, y)?;
    let (l, a) = (p.damping, p.alpha());
    Ok(DensityField {
        field: outer(y, t, &profile, |tt| damping.factor(l, a, tt))?,
        n: state.n,
        params: *p,
    })
}

/// Gauged-frame current at `t -> 0+` as a closed form:
/// `B^2 [(hbar^a / m^a) Im(psi* D psi) + (lambda/2) y^a |psi|^2]`.
pub fn gauged_current_profile(state: &Eigenstate, p: &BatemanParams) -> Result<PolyExpSum> {
    let psi = state.normalized_wavefunction()?;
    let d_psi = psi.conformable_diff(p.order);
    let flux = psi.conj().multiply(&d_psi)?.im().scale_re(p.hbar_a() / p.mass_a());
    let density = psi.conj().multiply(&psi)?.re();
    let drift = PolyExpSum::term(p.damping / 2.0, p.alpha(), 0.0, 1.0)?.multiply(&density)?;
    Ok(flux.add(&drift))
}

/// Original-frame current at `t -> 0+`, sampled: the gauge phase
/// `exp(-i theta)`, `theta = m^a lambda y^2a / (4 alpha hbar^a)`, is applied to
/// `psi` before the current is formed.
fn original_current_profile(state: &Eigenstate, p: &BatemanParams, y: &Grid1D) -> Result<Vec<f64>> {
    let a = p.alpha();
    let (m, hb) = (p.mass_a(), p.hbar_a());
    let psi = state.normalized_wavefunction()?;
    let d_psi = psi.conformable_diff(p.order);
    let theta = PolyExpSum::term(m * p.damping / (4.0 * a * hb), 2.0 * a, 0.0, 1.0)?;
    let d_theta = theta.conformable_diff(p.order);
    let i = Complex64::i();
    y.points()
        .iter()
        .map(|&yy| {
            let phase = Complex64::from_polar(1.0, -theta.evaluate(yy)?.re);
            let v = psi.evaluate(yy)?;
            let psi_o = phase * v;
            let d_psi_o = phase * (d_psi.evaluate(yy)? - i * d_theta.evaluate(yy)?.re * v);
            let flux = (psi_o.conj() * d_psi_o - psi_o * d_psi_o.conj()) * (hb / (2.0 * m)) / i;
            Ok(flux.re + 0.5 * p.damping * yy.powf(a) * psi_o.norm_sqr())
        })
        .collect()
}

/// `j(y, t)` in the chosen frame.
pub fn probability_current(
    state: &Eigenstate,
    p: &BatemanParams,
    frame: Frame,
    y: &Grid1D,
    t: &Grid1D,
) -> Result<CurrentField> {
    let profile = match frame {
        Frame::Gauged => {
            let j = gauged_current_profile(state, p)?;
            y.points()
                .iter()
                .map(|&v| Ok(j.evaluate(v)?.re))
                .collect::<Result<Vec<_>>>()?
        }
        Frame::Original => original_current_profile(state, p, y)?,
    };
    let (l, a) = (p.damping, p.alpha());
    Ok(CurrentField {
        field: outer(y, t, &profile, |tt| DampingExponent::Literal.factor(l, a, tt))?,
        n: state.n,
        frame,
    })
}

/// Pointwise `D^a_t rho + D^a_y j`.
///
/// `D^a_t rho = -(lambda alpha / 2) rho` exactly; `D^a_y j` is analytic in
/// the gauged frame and a finite difference in the original frame.
pub fn continuity_residual(
    state: &Eigenstate,
    p: &BatemanParams,
    frame: Frame,
    y: &Grid1D,
    t: &Grid1D,
) -> Result<Field2D> {
    let (l, a) = (p.damping, p.alpha());
    let damping = DampingExponent::Literal;
    let rho0 = initial_density(state, y)?;
    let dj0: Vec<f64> = match frame {
        Frame::Gauged => {
            let dj = gauged_current_profile(state, p)?.conformable_diff(p.order);
            y.points()
                .iter()
                .map(|&v| Ok(dj.evaluate(v)?.re))
                .collect::<Result<_>>()?
        }
        Frame::Original => {
            let j = original_current_profile(state, p, y)?;
            conformable_derivative(&SampledField::from_real(y.clone(), &j)?, p.order)?.real_parts()
        }
    };
    let rate = damping.rate(l, a);
    let profile: Vec<f64> = rho0.iter().zip(&dj0).map(|(r, d)| rate * r + d).collect();
    outer(y, t, &profile, |tt| damping.factor(l, a, tt))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            other => Err(Error::Domain(format!(
                "unknown figure '{other}' (expected fig1|fig2|fig3)"
            ))),
        }
    }
}

pub const FIG3_ORDERS: [f64; 5] = [0.80, 0.85, 0.90, 0.95, 1.00];

/// Grid and quadrature settings for figure reproduction.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOverrides {
    pub y: Grid1D,
    pub t: Grid1D,
    pub quadrature: QuadratureSpec,
}

impl Default for FigureOverrides {
    fn default() -> Self {
        Self {
            y: Grid1D::uniform(1e-3, 8.0, 800).expect("valid default grid"),
            t: Grid1D::uniform(1e-3, 5.0, 50).expect("valid default grid"),
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// One long-form row `(figure, n, alpha, y, t, rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub figure: Figure,
    pub n: usize,
    pub alpha: f64,
    pub y: f64,
    pub t: f64,
    pub rho: f64,
}

/// Figure parameter sets: (params, states) per panel.
pub fn figure_panels(figure: Figure) -> Result<Vec<(BatemanParams, Vec<usize>)>> {
    Ok(match figure {
        Figure::Fig1 => vec![(BatemanParams::new(1.0, 1.0, 0.0, 1.0, 1.0)?, vec![0, 1])],
        Figure::Fig2 => vec![(BatemanParams::new(1.0, 1.0, 0.5, 1.0, 1.0)?, vec![0, 1])],
        Figure::Fig3 => FIG3_ORDERS
            .iter()
            .map(|&a| Ok((BatemanParams::with_unit_f(a, 1.0)?, vec![0, 1, 2, 3])))
            .collect::<Result<_>>()?,
    })
}

/// Densities behind each figure. `fig1`/`fig2` are evaluated over the
/// `(y, t)` grid; `fig3` is the `t -> 0+` slice, reported with `t = 0`.
pub fn figure_data(figure: Figure, overrides: &FigureOverrides) -> Result<Vec<FigureRow>> {
    let mut rows = Vec::new();
    for (p, states) in figure_panels(figure)? {
        for n in states {
            let state = Eigenstate::rodriguez(&p, n)?.normalized(&overrides.quadrature)?;
            let row = |y: f64, t: f64, rho: f64| FigureRow {
                figure,
                n,
                alpha: p.alpha(),
                y,
                t,
                rho,
            };
            match figure {
                Figure::Fig3 => {
                    let rho = initial_density(&state, &overrides.y)?;
                    rows.extend(overrides.y.points().iter().zip(rho).map(|(&y, r)| row(y, 0.0, r)));
                }
                Figure::Fig1 | Figure::Fig2 => {
                    let d = probability_density(&state, &p, &overrides.y, &overrides.t)?;
                    for (ti, &t) in overrides.t.points().iter().enumerate() {
                        rows.extend(
                            overrides
                                .y
                                .points()
                                .iter()
                                .zip(d.field.row(ti))
                                .map(|(&y, &r)| row(y, t, r)),
                        );
                    }
                }
            }
        }
    }
    Ok(rows)
}
