//! Tier runners: build a schedule, run one model tier at one sweep point,
//! and hand back sampled trajectories. Shared by the figure engine, the CLI
//! `simulate` command, and the acceptance suite.

use anyhow::{anyhow, Result};
use shaken_lattice::fewlevel::{
    evolve_levels, h4l_detuned, h4l_rwa, h6l, populations_and_fidelity, LevelState,
};
use shaken_lattice::grid::{
    angular_momentum, imaginary_time_ground_state, map_controls, split_step_evolve,
    GridSpec, GridState, InitialLocalization, Populations, ProjectionBasis,
};
use shaken_lattice::schemes::{piecewise_scheme, polynomial_scheme, PulseSchedule};
use shaken_lattice::{well_spectrum, LatticeConfig, WellSpectrum};

use crate::config::{RunConfig, SchemeChoice, Tier};

/// One sweep point, fully specified.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub scheme: SchemeChoice,
    pub tier: Tier,
    pub v0: f64,
    pub total_time: f64,
    /// Shaking-frequency deviation above resonance, units of omega:
    /// the carrier is omega_x = -(omega_d + detuning).
    pub detuning: f64,
}

/// A sampled trajectory row; `p20`/`p02`/`lz` are tier-dependent extras.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryRow {
    pub t: f64,
    pub p10: f64,
    pub p00: f64,
    pub p01: f64,
    pub p11: f64,
    pub p20: Option<f64>,
    pub p02: Option<f64>,
    pub leakage: Option<f64>,
    pub lz: Option<f64>,
    pub fidelity: f64,
}

pub struct TierRun {
    pub rows: Vec<TrajectoryRow>,
    pub final_fidelity: f64,
    /// Grid tier only.
    pub final_populations: Option<Populations>,
    pub final_lz: Option<f64>,
}

pub fn build_schedule(cfg: &RunConfig, scheme: SchemeChoice, total_time: f64) -> Result<PulseSchedule> {
    match scheme {
        SchemeChoice::Polynomial => polynomial_scheme(total_time, cfg.c1, cfg.c2),
        SchemeChoice::Piecewise => {
            piecewise_scheme(total_time, cfg.t_s_fraction * total_time, cfg.c1, cfg.c2)
        }
    }
    .map_err(|e| anyhow!("scheme synthesis: {e}"))
}

pub fn spectrum_for(cfg: &RunConfig, v0: f64) -> Result<(LatticeConfig, WellSpectrum)> {
    let config = LatticeConfig::new(v0).map_err(|e| anyhow!("{e}"))?;
    let spectrum = well_spectrum(&config, cfg.n_well_points).map_err(|e| anyhow!("{e}"))?;
    Ok((config, spectrum))
}

pub fn sample_times(total_time: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| total_time * i as f64 / n as f64).collect()
}

/// Run one few-level tier (4L, 4L-detuned, or 6L).
pub fn run_levels(cfg: &RunConfig, point: Point) -> Result<TierRun> {
    let schedule = build_schedule(cfg, point.scheme, point.total_time)?;
    let (_config, spectrum) = spectrum_for(cfg, point.v0)?;
    let samples = sample_times(point.total_time, cfg.n_samples);
    let carrier = -(spectrum.omega_d + point.detuning);
    let dt = cfg.dt_levels;

    let rows: Vec<TrajectoryRow> = match point.tier {
        Tier::FourLevel => {
            let h = |t: f64| h4l_rwa(schedule.omega_x(t), schedule.omega_rho(t), 0.0);
            let traj = evolve_levels(h, &LevelState::ground4(), point.total_time, dt, &samples)
                .map_err(|e| anyhow!("{e}"))?;
            traj.iter().map(|s| level_row(s, false)).collect()
        }
        Tier::FourLevelDetuned => {
            let h = |t: f64| h4l_detuned(t, &schedule, &spectrum, carrier);
            let traj = evolve_levels(h, &LevelState::ground4(), point.total_time, dt, &samples)
                .map_err(|e| anyhow!("{e}"))?;
            traj.iter().map(|s| level_row(s, false)).collect()
        }
        Tier::SixLevel => {
            let h = |t: f64| h6l(t, &schedule, &spectrum, carrier);
            let traj = evolve_levels(h, &LevelState::ground6(), point.total_time, dt, &samples)
                .map_err(|e| anyhow!("{e}"))?;
            traj.iter().map(|s| level_row(s, true)).collect()
        }
        Tier::Grid => return run_grid(cfg, point),
    };
    let final_fidelity = rows.last().map(|r| r.fidelity).unwrap_or(0.0);
    Ok(TierRun { rows, final_fidelity, final_populations: None, final_lz: None })
}

fn level_row(state: &LevelState, six: bool) -> TrajectoryRow {
    let (pops, fidelity) = populations_and_fidelity(state);
    TrajectoryRow {
        t: state.time,
        p10: pops[0],
        p00: pops[1],
        p01: pops[2],
        p11: pops[3],
        p20: six.then(|| pops[4]),
        p02: six.then(|| pops[5]),
        leakage: None,
        lz: None,
        fidelity,
    }
}

/// Run the full grid tier at one point (single-well domain).
pub fn run_grid(cfg: &RunConfig, point: Point) -> Result<TierRun> {
    let schedule = build_schedule(cfg, point.scheme, point.total_time)?;
    let (config, spectrum) = spectrum_for(cfg, point.v0)?;
    let carrier = -(spectrum.omega_d + point.detuning);
    let controls = map_controls(&schedule, &spectrum, &config, Some(carrier))
        .map_err(|e| anyhow!("{e}"))?;
    let spec = GridSpec::single_well(cfg.grid_points).map_err(|e| anyhow!("{e}"))?;
    let mut state = imaginary_time_ground_state(spec, &config, InitialLocalization::Delocalized)
        .map_err(|e| anyhow!("{e}"))?;
    let basis = ProjectionBasis::new(&spec, &config, &spectrum, 0.0, 0.0);
    let samples = sample_times(point.total_time, cfg.n_samples);

    let mut rows: Vec<TrajectoryRow> = Vec::with_capacity(samples.len());
    split_step_evolve(
        &mut state,
        &controls,
        &config,
        point.total_time,
        cfg.dt_grid,
        &samples,
        |s: &GridState| {
            let pops = basis.populations(s);
            let am = angular_momentum(s, &config, (0.0, 0.0));
            rows.push(TrajectoryRow {
                t: s.time,
                p10: pops.p[1][0],
                p00: pops.p[0][0],
                p01: pops.p[0][1],
                p11: pops.p[1][1],
                p20: Some(pops.p[2][0]),
                p02: Some(pops.p[0][2]),
                leakage: Some(pops.leakage),
                lz: Some(am.lz),
                fidelity: pops.fidelity,
            });
            Ok(())
        },
    )
    .map_err(|e| anyhow!("{e}"))?;

    let final_pops = basis.populations(&state);
    let final_lz = angular_momentum(&state, &config, (0.0, 0.0));
    Ok(TierRun {
        final_fidelity: final_pops.fidelity,
        final_populations: Some(final_pops),
        final_lz: Some(final_lz.lz),
        rows,
    })
}

/// Final-state fidelity only (cheaper bookkeeping for scans).
pub fn final_fidelity(cfg: &RunConfig, point: Point) -> Result<f64> {
    let mut scan_cfg = cfg.clone();
    scan_cfg.n_samples = 1;
    Ok(run_levels(&scan_cfg, point)?.final_fidelity)
}
