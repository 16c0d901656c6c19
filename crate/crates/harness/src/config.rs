//! Run configuration: a single JSON document, overridable by CLI flags,
//! hashed for reproducible manifests.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Polynomial,
    Piecewise,
}

impl SchemeChoice {
    pub fn name(self) -> &'static str {
        match self {
            SchemeChoice::Polynomial => "polynomial",
            SchemeChoice::Piecewise => "piecewise",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "polynomial" => Ok(Self::Polynomial),
            "piecewise" => Ok(Self::Piecewise),
            other => bail!("unknown scheme '{other}' (expected polynomial|piecewise)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tier {
    #[serde(rename = "4L")]
    FourLevel,
    #[serde(rename = "4L-detuned")]
    FourLevelDetuned,
    #[serde(rename = "6L")]
    SixLevel,
    #[serde(rename = "grid")]
    Grid,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::FourLevel => "4L",
            Tier::FourLevelDetuned => "4L-detuned",
            Tier::SixLevel => "6L",
            Tier::Grid => "grid",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "4L" => Ok(Self::FourLevel),
            "4L-detuned" => Ok(Self::FourLevelDetuned),
            "6L" => Ok(Self::SixLevel),
            "grid" => Ok(Self::Grid),
            other => bail!("unknown tier '{other}' (expected 4L|4L-detuned|6L|grid)"),
        }
    }
}

/// Full batch-run configuration. Every field has a shipped default
/// (`defaults.json` mirrors this) and can be overridden by CLI flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Schemes to run.
    pub schemes: Vec<SchemeChoice>,
    /// Total pulse time in units of 1/omega.
    pub total_time: f64,
    /// Piecewise switch time as a fraction of T.
    pub t_s_fraction: f64,
    /// Lattice depths (units of hbar omega) for sweeps.
    pub v0_list: Vec<f64>,
    /// Shaking-frequency detunings (units of omega) for resonance scans;
    /// positive values shift the shaking frequency above omega_d.
    pub detuning_list: Vec<f64>,
    /// Model tiers to run.
    pub tiers: Vec<Tier>,
    /// Grid points per axis (power of two).
    pub grid_points: usize,
    /// Lattice periods per axis for multi-well runs (odd).
    pub wells: usize,
    /// Split-operator step (units of 1/omega).
    pub dt_grid: f64,
    /// Few-level RK4 step (units of 1/omega).
    pub dt_levels: f64,
    /// 1D well-solver grid points.
    pub n_well_points: usize,
    /// Invariant constants.
    pub c1: f64,
    pub c2: f64,
    /// Total times for the fidelity-vs-T figure.
    pub fidelity_t_list: Vec<f64>,
    /// Total times for the populations figure.
    pub populations_t_list: Vec<f64>,
    /// Trajectory samples per run in emitted CSVs.
    pub n_samples: usize,
    /// Output directory.
    pub out_dir: PathBuf,
    /// Sweep worker threads (0 = number of cores).
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schemes: vec![SchemeChoice::Polynomial, SchemeChoice::Piecewise],
            total_time: 300.0,
            t_s_fraction: 0.75,
            v0_list: vec![3.0],
            detuning_list: vec![
                -0.02, -0.01, -0.005, -0.0025, 0.0, 0.0025, 0.005, 0.01, 0.02, 0.035, 0.05,
            ],
            tiers: vec![Tier::FourLevel, Tier::Grid],
            grid_points: 128,
            wells: 3,
            dt_grid: 2.5e-3,
            dt_levels: 0.01,
            n_well_points: 1024,
            c1: 10.0,
            c2: 11.0,
            fidelity_t_list: vec![50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0, 450.0, 500.0],
            populations_t_list: vec![100.0, 500.0],
            n_samples: 200,
            out_dir: PathBuf::from("out"),
            workers: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            bail!("config: schemes list must be non-empty");
        }
        if self.tiers.is_empty() {
            bail!("config: tiers list must be non-empty");
        }
        if self.v0_list.is_empty() {
            bail!("config: v0_list must be non-empty");
        }
        if self.detuning_list.is_empty() {
            bail!("config: detuning_list must be non-empty");
        }
        if !(self.total_time > 0.0) {
            bail!("config: total_time must be positive");
        }
        if !(self.t_s_fraction > 0.0 && self.t_s_fraction < 1.0) {
            bail!("config: t_s_fraction must lie in (0, 1)");
        }
        if !self.grid_points.is_power_of_two() {
            bail!("config: grid_points must be a power of two");
        }
        if self.wells % 2 == 0 {
            bail!("config: wells must be odd so a central well exists");
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding; identifies a run.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        hex(&h.finalize())
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

pub fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_and_hash_stable() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.hash(), cfg.clone().hash());
        // hash changes with content
        let mut other = cfg.clone();
        other.total_time = 301.0;
        assert_ne!(cfg.hash(), other.hash());
    }

    #[test]
    fn rejects_empty_tiers() {
        let mut cfg = RunConfig::default();
        cfg.tiers.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn roundtrips_through_json() {
        let cfg = RunConfig::default();
        let text = cfg.to_json_pretty();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg.hash(), back.hash());
    }
}
