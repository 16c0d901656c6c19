//! SI-unit translation of the dimensionless scheme parameters for a concrete
//! atom/laser combination: recoil energy, shaking frequency, pulse duration,
//! and the ground-band tunnelling scale that bounds the Mott window.

use anyhow::{ensure, Result};
use serde::{Deserialize, Serialize};
use shaken_lattice::{well_spectrum, LatticeConfig};

pub const HBAR: f64 = 1.054_571_817e-34; // J s
pub const ATOMIC_MASS_KG: f64 = 1.660_539_066_60e-27;
/// 133Cs atomic mass.
pub const CS_MASS_KG: f64 = 132.905_451_961 * ATOMIC_MASS_KG;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SiParams {
    /// Atom mass in kg.
    pub mass_kg: f64,
    /// Laser wavelength in m.
    pub wavelength_m: f64,
    /// Lattice depth in recoil energies.
    pub v0_over_er: f64,
    /// Dimensionless pulse duration omega * T.
    pub omega_t: f64,
}

impl Default for SiParams {
    fn default() -> Self {
        Self {
            mass_kg: CS_MASS_KG,
            wavelength_m: 1064e-9,
            v0_over_er: 36.0,
            omega_t: 300.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SiReport {
    /// Recoil energy E_r = hbar^2 k^2 / 2m, in joules and as a frequency.
    pub recoil_energy_j: f64,
    pub recoil_frequency_hz: f64,
    /// Harmonic well frequency omega/2pi in Hz (hbar omega = 2 sqrt(V0 E_r)).
    pub omega_over_2pi_hz: f64,
    /// Lattice depth in units of hbar omega: sqrt(V0/E_r)/2.
    pub v0_over_hbar_omega: f64,
    /// Shaking resonance omega_d/2pi in Hz, from the solved well spectrum.
    pub omega_d_over_2pi_hz: f64,
    /// Pulse duration in seconds for the requested omega*T.
    pub pulse_duration_s: f64,
    /// Deep-lattice ground-band tunnelling rate J0 (joules) and hbar/J0 (s).
    pub j0_joule: f64,
    pub hbar_over_j0_s: f64,
    /// Mott-regime margin: (hbar/J0) / T. The schemes assume this is >> 1.
    pub mott_margin: f64,
}

/// Translate dimensionless scheme parameters into laboratory numbers.
pub fn si_calculator(params: &SiParams) -> Result<SiReport> {
    ensure!(params.mass_kg > 0.0, "mass must be positive");
    ensure!(params.wavelength_m > 0.0, "wavelength must be positive");
    ensure!(params.v0_over_er > 0.0, "lattice depth must be positive");
    ensure!(params.omega_t > 0.0, "omega*T must be positive");

    let k = 2.0 * std::f64::consts::PI / params.wavelength_m;
    let e_r = HBAR * HBAR * k * k / (2.0 * params.mass_kg);
    let v0_j = params.v0_over_er * e_r;
    // omega = sqrt(2 V0 k^2 / m) => hbar omega = 2 sqrt(V0 E_r)
    let hbar_omega = 2.0 * (v0_j * e_r).sqrt();
    let omega = hbar_omega / HBAR;
    let v0_dimensionless = params.v0_over_er.sqrt() / 2.0;

    let config = LatticeConfig::new(v0_dimensionless)
        .map_err(|e| anyhow::anyhow!("lattice config: {e}"))?;
    let spectrum =
        well_spectrum(&config, 1024).map_err(|e| anyhow::anyhow!("well solve: {e}"))?;
    let omega_d = spectrum.omega_d * omega;

    let ratio = params.v0_over_er;
    let j0 = 4.0 * e_r / std::f64::consts::PI.sqrt() * ratio.powf(0.75) * (-2.0 * ratio.sqrt()).exp();
    let hbar_over_j0 = HBAR / j0;
    let duration = params.omega_t / omega;

    let h_planck = 2.0 * std::f64::consts::PI * HBAR;
    Ok(SiReport {
        recoil_energy_j: e_r,
        recoil_frequency_hz: e_r / h_planck,
        omega_over_2pi_hz: omega / (2.0 * std::f64::consts::PI),
        v0_over_hbar_omega: v0_dimensionless,
        omega_d_over_2pi_hz: omega_d / (2.0 * std::f64::consts::PI),
        pulse_duration_s: duration,
        j0_joule: j0,
        hbar_over_j0_s: hbar_over_j0,
        mott_margin: hbar_over_j0 / duration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cesium_reference_numbers() {
        let report = si_calculator(&SiParams::default()).unwrap();
        // 36 E_r corresponds to 3 hbar omega exactly: sqrt(36)/2
        assert!((report.v0_over_hbar_omega - 3.0).abs() < 1e-12);
        // shaking resonance ~ 14 kHz
        assert!(
            (report.omega_d_over_2pi_hz - 14_000.0).abs() < 1000.0,
            "omega_d/2pi = {}",
            report.omega_d_over_2pi_hz
        );
        // pulse time ~ 3 ms at omega T = 300
        assert!(
            (report.pulse_duration_s - 3e-3).abs() < 0.5e-3,
            "T = {}",
            report.pulse_duration_s
        );
        // tunnelling time ~ 589 ms
        assert!(
            (report.hbar_over_j0_s - 0.589).abs() < 0.010,
            "hbar/J0 = {}",
            report.hbar_over_j0_s
        );
        assert!(report.mott_margin > 100.0);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        let mut p = SiParams::default();
        p.wavelength_m = 0.0;
        assert!(si_calculator(&p).is_err());
    }
}
