//! Discretized-operator eigensolver used to cross-check the closed-form
//! spectrum, plus finite-difference residual norms.
//!
//! In `z = y^alpha` the derived-mode radial operator becomes
//! `-(hbar^2a alpha^2 / 2 m^a) d^2/dz^2 + (m^a Omega^2 / 2) z^2` on
//! `z > 0`, a constant-coefficient problem discretized here on a uniform
//! grid. A Neumann condition at `z = 0` picks out the even family, a
//! Dirichlet condition the odd one.

use crate::bateman::{schrodinger_residual_sampled, BatemanParams, KineticMode};
use crate::conformable::SampledField;
use crate::error::{Error, Result};

use super::tridiag::Tridiagonal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Neumann,
    Dirichlet,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigensolverSpec {
    pub nodes: usize,
    pub z_max: f64,
    pub boundary: Boundary,
}

impl EigensolverSpec {
    pub const MIN_NODES: usize = 500;

    pub fn new(nodes: usize, z_max: f64, boundary: Boundary) -> Result<Self> {
        let s = Self { nodes, z_max, boundary };
        s.validate()?;
        Ok(s)
    }

    /// 4000 nodes, `z_max = 10 / sqrt(F / alpha)`, both families.
    pub fn default_for(p: &BatemanParams) -> Result<Self> {
        let f = p.bound()?.f;
        Self::new(4000, 10.0 / (f / p.alpha()).sqrt(), Boundary::Both)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < Self::MIN_NODES {
            return Err(Error::Domain(format!(
                "eigensolver needs at least {} nodes, got {}",
                Self::MIN_NODES,
                self.nodes
            )));
        }
        if !(self.z_max.is_finite() && self.z_max > 0.0) {
            return Err(Error::Domain(format!("z_max must be positive, got {}", self.z_max)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.z_max / self.nodes as f64
    }
}

/// Ascending list of `(n, E_n)` with consecutive `n` from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    entries: Vec<(usize, f64)>,
}

impl Spectrum {
    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        if let Some(w) = energies.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Eigensolver(format!(
                "spectrum is not strictly increasing at index {}",
                w + 1
            )));
        }
        Ok(Self {
            entries: energies.into_iter().enumerate().collect(),
        })
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn energies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn energy(&self, n: usize) -> Option<f64> {
        self.entries.get(n).map(|e| e.1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

struct ZOperator {
    kinetic: f64,
    stiffness: f64,
}

impl ZOperator {
    fn new(p: &BatemanParams) -> Result<Self> {
        let omega_sq = p.bound()?.omega_sq;
        let a = p.alpha();
        Ok(Self {
            kinetic: p.hbar_a() * p.hbar_a() * a * a / (2.0 * p.mass_a()),
            stiffness: 0.5 * p.mass_a() * omega_sq,
        })
    }

    fn potential(&self, z: f64) -> f64 {
        self.stiffness * z * z
    }

    /// Three-point discretization; `psi(z_max) = 0` always, the `z = 0`
    /// condition via a mirror (Neumann) or zero (Dirichlet) ghost node.
    fn matrix(&self, spec: &EigensolverSpec, neumann: bool) -> Result<Tridiagonal> {
        let h = spec.spacing();
        let k = self.kinetic / (h * h);
        let n = spec.nodes;
        let (first, count) = if neumann { (0, n) } else { (1, n - 1) };
        let diag = (first..first + count)
            .map(|i| 2.0 * k + self.potential(i as f64 * h))
            .collect();
        let mut off_sq = vec![k * k; count - 1];
        if neumann {
            // ghost psi_{-1} = psi_1 doubles the coupling in row 0
            off_sq[0] = 2.0 * k * k;
        }
        Tridiagonal::new(diag, off_sq)
    }

    fn solve(&self, spec: &EigensolverSpec, neumann: bool, count: usize) -> Result<Vec<f64>> {
        let m = self.matrix(spec, neumann)?;
        let values = m.lowest(count)?;
        // states must sit well inside the box to be free of wall effects
        let wall = self.potential(0.8 * spec.z_max);
        if let Some(&e) = values.iter().find(|&&e| e >= wall) {
            return Err(Error::Eigensolver(format!(
                "eigenvalue {e} is not resolved: exceeds the potential {wall} near z_max = {}",
                spec.z_max
            )));
        }
        Ok(values)
    }
}

/// Lowest `n_max + 1` eigenvalues of the discretized `z`-space operator.
pub fn oracle_spectrum(p: &BatemanParams, n_max: usize, spec: &EigensolverSpec) -> Result<Spectrum> {
    spec.validate()?;
    let count = n_max + 1;
    if count > spec.nodes / 10 {
        return Err(Error::Eigensolver(format!(
            "{count} levels requested but {} nodes resolve at most {}",
            spec.nodes,
            spec.nodes / 10
        )));
    }
    let op = ZOperator::new(p)?;
    let energies = match spec.boundary {
        Boundary::Neumann => op.solve(spec, true, count)?,
        Boundary::Dirichlet => op.solve(spec, false, count)?,
        Boundary::Both => {
            let (even, odd) = std::thread::scope(|s| {
                let even = s.spawn(|| op.solve(spec, true, count));
                let odd = op.solve(spec, false, count);
                (even.join().expect("eigensolver thread panicked"), odd)
            });
            let mut all = even?;
            all.extend(odd?);
            all.sort_by(f64::total_cmp);
            all.truncate(count);
            all
        }
    };
    Spectrum::from_energies(energies)
}

/// Sup-norm of the finite-difference radial residual, skipping two nodes
/// at each end of the grid.
pub fn fd_residual_norm(psi: &SampledField, p: &BatemanParams, energy: f64, mode: KineticMode) -> Result<f64> {
    const SKIP: usize = 2;
    if psi.grid().len() < 2 * SKIP + 3 {
        return Err(Error::GridTooSmall {
            required: 2 * SKIP + 3,
            actual: psi.grid().len(),
        });
    }
    Ok(schrodinger_residual_sampled(psi, p, energy, mode)?.interior_sup_norm(SKIP))
}
