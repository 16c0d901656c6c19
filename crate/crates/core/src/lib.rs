//! Designs lattice-shaking control pulses by invariant-based inverse
//! engineering and validates them across three model tiers: a four-level
//! rotating-wave model, a six-level model, and a full 2D grid Schrodinger
//! simulation.
//!
//! Everything internal works in dimensionless units hbar = m = omega = 1,
//! where omega = sqrt(2 V0 k^2 / m) is the harmonic frequency of one lattice
//! well. Times are in omega^-1, energies in hbar*omega.

pub mod error;
pub mod fewlevel;
pub mod grid;
pub mod invariant;
pub mod lattice;
pub mod numerics;
pub mod schemes;

pub use error::{Error, Result};
pub use lattice::{matrix_elements, solve_well_eigenstates, well_spectrum, LatticeConfig, WellSpectrum};
