//! Batch orchestration for the lattice-shaking pulse toolkit: configuration,
//! tier runners, figure artifact emission, the SI-unit calculator, and the
//! acceptance-criteria engine behind `shaken validate`.

pub mod artifacts;
pub mod config;
pub mod figures;
pub mod runs;
pub mod si;
pub mod validate;
