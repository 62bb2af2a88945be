//! The conformable Bateman oscillator: parameters, spectrum, stationary
//! states, the Nikiforov-Uvarov reduction, and classical/gauge checks.

mod dynamics;
mod enu;
mod params;
mod states;

pub use dynamics::{
    canonical_momentum, classical_el_residual, gauge_residual, growing_trajectory, hamiltonian_value,
    oscillating_trajectory, EomSign,
};
pub use enu::{enu_pipeline, EnuSolution};
pub use params::{derived_params, energy, level_spacing, BatemanParams, DerivedParams};
pub use states::{
    eigenfunction_hermite, eigenfunction_rodriguez, hermite, hermite_coefficients, schrodinger_residual,
    schrodinger_residual_sampled, AnalyticProfile, Eigenstate, HermiteState, KineticMode, RadialProfile, StateSource,
    MAX_QUANTUM_NUMBER,
};
