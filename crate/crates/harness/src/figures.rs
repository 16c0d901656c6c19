//! Figure reproduction: each `figure` run sweeps the configured axes,
//! writes one artifact per (scheme, tier, sweep point), and a manifest.

use anyhow::{bail, Result};
use rayon::prelude::*;
use shaken_lattice::grid::{map_controls, multi_well_run, GridSpec, InitialLocalization};
use shaken_lattice::schemes::SchemeTag;

use crate::artifacts::{field_snapshot_bytes, real_field_bytes, ArtifactSink, CsvTable};
use crate::config::{RunConfig, SchemeChoice, Tier};
use crate::runs::{build_schedule, run_levels, sample_times, spectrum_for, Point, TierRun};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Couplings,
    Controls,
    Populations,
    FidelityVsT,
    Resonance,
    PhaseMap,
}

impl FigureId {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "couplings" => Self::Couplings,
            "controls" => Self::Controls,
            "populations" => Self::Populations,
            "fidelity_vs_T" | "fidelity-vs-t" => Self::FidelityVsT,
            "resonance" => Self::Resonance,
            "phase_map" | "phase-map" => Self::PhaseMap,
            other => bail!(
                "unknown figure '{other}' (expected couplings|controls|populations|\
                 fidelity_vs_T|resonance|phase_map)"
            ),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Couplings => "couplings",
            Self::Controls => "controls",
            Self::Populations => "populations",
            Self::FidelityVsT => "fidelity_vs_T",
            Self::Resonance => "resonance",
            Self::PhaseMap => "phase_map",
        }
    }
}

/// Outcome of one sweep point, recorded in the figure summary.
#[derive(Debug)]
struct PointOutcome {
    label: String,
    result: Result<f64>,
}

/// Run a figure; emits artifacts plus `manifest.json` under the config's
/// output directory. Per-point failures are recorded without aborting.
pub fn run_figure(cfg: &RunConfig, figure: FigureId) -> Result<std::path::PathBuf> {
    cfg.validate()?;
    let sink = ArtifactSink::new(cfg.out_dir.join(figure.name()))?;
    sink.write("config.json", cfg.to_json_pretty().as_bytes())?;

    match figure {
        FigureId::Couplings => couplings(cfg, &sink)?,
        FigureId::Controls => controls(cfg, &sink)?,
        FigureId::Populations => populations(cfg, &sink)?,
        FigureId::FidelityVsT => fidelity_vs_t(cfg, &sink)?,
        FigureId::Resonance => resonance(cfg, &sink)?,
        FigureId::PhaseMap => phase_map(cfg, &sink)?,
    }
    sink.finish(&cfg.hash())
}

fn couplings(cfg: &RunConfig, sink: &ArtifactSink) -> Result<()> {
    for &scheme in &cfg.schemes {
        let schedule = build_schedule(cfg, scheme, cfg.total_time)?;
        let mut table = CsvTable::new(&["t", "omega_x", "omega_rho", "omega_x_dot", "omega_rho_dot"]);
        for t in sample_times(cfg.total_time, 2000) {
            table.row(&[
                t,
                schedule.omega_x(t),
                schedule.omega_rho(t),
                schedule.omega_x_dot(t),
                schedule.omega_rho_dot(t),
            ]);
        }
        sink.write(&format!("couplings_{}.csv", scheme.name()), &table.into_bytes())?;
        sink.write(
            &format!("schedule_{}.json", scheme.name()),
            schedule_json(&schedule)?.as_bytes(),
        )?;
    }
    Ok(())
}

/// Dense-sampled schedule artifact.
pub fn schedule_json(schedule: &shaken_lattice::schemes::PulseSchedule) -> Result<String> {
    let n = 2000;
    let ts = sample_times(schedule.total_time(), n);
    let col = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { ts.iter().map(|&t| f(t)).collect() };
    let mut doc = serde_json::json!({
        "scheme": schedule.tag().name(),
        "total_time": schedule.total_time(),
        "c1": schedule.constants().c1,
        "c2": schedule.constants().c2,
        "samples": {
            "t": ts,
            "omega_x": col(&|t| schedule.omega_x(t)),
            "omega_x_dot": col(&|t| schedule.omega_x_dot(t)),
            "omega_x_ddot": col(&|t| schedule.omega_x_ddot(t)),
            "omega_rho": col(&|t| schedule.omega_rho(t)),
            "omega_rho_dot": col(&|t| schedule.omega_rho_dot(t)),
            "omega_rho_ddot": col(&|t| schedule.omega_rho_ddot(t)),
        },
    });
    match schedule.tag() {
        SchemeTag::Polynomial { w } => {
            doc["w"] = serde_json::json!(w);
        }
        SchemeTag::Piecewise { t_s } => {
            doc["t_s"] = serde_json::json!(t_s);
        }
        SchemeTag::Custom => {}
    }
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn controls(cfg: &RunConfig, sink: &ArtifactSink) -> Result<()> {
    let v0 = cfg.v0_list[0];
    let (config, spectrum) = spectrum_for(cfg, v0)?;
    for &scheme in &cfg.schemes {
        let schedule = build_schedule(cfg, scheme, cfg.total_time)?;
        let ctl = map_controls(&schedule, &spectrum, &config, None)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let lattice_const = 2.0 * config.ell;
        let mut table =
            CsvTable::new(&["t", "r_x", "rho", "r_x_over_lattice_const", "r_x_ddot", "g_x"]);
        for t in sample_times(cfg.total_time, 4000) {
            table.row(&[
                t,
                ctl.r_x(t),
                ctl.rho(t),
                ctl.r_x(t) / lattice_const,
                ctl.r_x_ddot(t),
                ctl.g_x(t),
            ]);
        }
        sink.write(&format!("controls_{}_V0_{v0}.csv", scheme.name()), &table.into_bytes())?;
    }
    Ok(())
}

fn trajectory_csv(run: &TierRun, six_or_grid: bool, grid: bool) -> Vec<u8> {
    let mut header: Vec<&str> = if grid {
        vec!["t", "P00", "P10", "P01", "P11", "leakage", "fidelity", "Lz"]
    } else if six_or_grid {
        vec!["t", "P10", "P00", "P01", "P11", "P20", "P02", "fidelity"]
    } else {
        vec!["t", "P10", "P00", "P01", "P11", "fidelity"]
    };
    let mut table = CsvTable::new(&std::mem::take(&mut header));
    for r in &run.rows {
        if grid {
            table.row(&[
                r.t,
                r.p00,
                r.p10,
                r.p01,
                r.p11,
                r.leakage.unwrap_or(0.0),
                r.fidelity,
                r.lz.unwrap_or(0.0),
            ]);
        } else if six_or_grid {
            table.row(&[
                r.t,
                r.p10,
                r.p00,
                r.p01,
                r.p11,
                r.p20.unwrap_or(0.0),
                r.p02.unwrap_or(0.0),
                r.fidelity,
            ]);
        } else {
            table.row(&[r.t, r.p10, r.p00, r.p01, r.p11, r.fidelity]);
        }
    }
    table.into_bytes()
}

/// Run a list of points in parallel, write one trajectory per point, return
/// (label, final fidelity) outcomes.
fn run_points(
    cfg: &RunConfig,
    sink: &ArtifactSink,
    points: &[(String, Point)],
) -> Result<Vec<PointOutcome>> {
    let outcomes: Vec<PointOutcome> = points
        .par_iter()
        .map(|(label, point)| {
            let result = run_levels(cfg, *point).and_then(|run| {
                let grid = point.tier == Tier::Grid;
                let six = point.tier == Tier::SixLevel;
                sink.write(&format!("{label}.csv"), &trajectory_csv(&run, six, grid))?;
                Ok(run.final_fidelity)
            });
            PointOutcome { label: label.clone(), result }
        })
        .collect();
    Ok(outcomes)
}

fn summarize(sink: &ArtifactSink, name: &str, outcomes: &[PointOutcome]) -> Result<()> {
    let mut doc = Vec::new();
    for o in outcomes {
        match &o.result {
            Ok(f) => doc.push(serde_json::json!({"point": o.label, "fidelity": f})),
            Err(e) => doc.push(serde_json::json!({"point": o.label, "error": e.to_string()})),
        }
    }
    sink.write(name, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    Ok(())
}

fn populations(cfg: &RunConfig, sink: &ArtifactSink) -> Result<()> {
    let v0 = cfg.v0_list[0];
    let mut points = Vec::new();
    for &scheme in &cfg.schemes {
        for &tier in &cfg.tiers {
            for &t_total in &cfg.populations_t_list {
                let label = format!(
                    "populations_{}_{}_T{}",
                    scheme.name(),
                    tier.name(),
                    t_total
                );
                points.push((
                    label,
                    Point { scheme, tier, v0, total_time: t_total, detuning: 0.0 },
                ));
            }
        }
    }
    let outcomes = run_points(cfg, sink, &points)?;
    summarize(sink, "populations_summary.json", &outcomes)
}

fn fidelity_vs_t(cfg: &RunConfig, sink: &ArtifactSink) -> Result<()> {
    let mut points = Vec::new();
    for &scheme in &cfg.schemes {
        for &v0 in &cfg.v0_list {
            for &t_total in &cfg.fidelity_t_list {
                let label = format!("fidelity_{}_grid_V0_{v0}_T{}", scheme.name(), t_total);
                points.push((
                    label,
                    Point { scheme, tier: Tier::Grid, v0, total_time: t_total, detuning: 0.0 },
                ));
            }
        }
    }
    let outcomes = run_points(cfg, sink, &points)?;
    // summary table: scheme, V0, T, fidelity
    let mut table = CsvTable::new(&["scheme", "V0", "T", "fidelity"]);
    let mut idx = 0usize;
    for &scheme in &cfg.schemes {
        for &v0 in &cfg.v0_list {
            for &t_total in &cfg.fidelity_t_list {
                if let Ok(f) = &outcomes[idx].result {
                    table.labeled_row(&[scheme.name()], &[v0, t_total, *f]);
                }
                idx += 1;
            }
        }
    }
    sink.write("fidelity_vs_T.csv", &table.into_bytes())?;
    summarize(sink, "fidelity_vs_T_summary.json", &outcomes)
}

fn resonance(cfg: &RunConfig, sink: &ArtifactSink) -> Result<()> {
    let tiers = [Tier::Grid, Tier::FourLevelDetuned, Tier::SixLevel];
    let v0 = cfg.v0_list[0];
    let mut points = Vec::new();
    for &scheme in &cfg.schemes {
        for &tier in &tiers {
            for &d in &cfg.detuning_list {
                let label = format!(
                    "resonance_{}_{}_delta{:+.4}",
                    scheme.name(),
                    tier.name(),
                    d
                );
                points.push((
                    label,
                    Point { scheme, tier, v0, total_time: cfg.total_time, detuning: d },
                ));
            }
        }
    }
    let outcomes = run_points(cfg, sink, &points)?;
    let mut table = CsvTable::new(&["scheme", "tier", "detuning", "fidelity"]);
    let mut idx = 0usize;
    for &scheme in &cfg.schemes {
        for &tier in &tiers {
            for &d in &cfg.detuning_list {
                if let Ok(f) = &outcomes[idx].result {
                    table.labeled_row(&[scheme.name(), tier.name()], &[d, *f]);
                }
                idx += 1;
            }
        }
    }
    sink.write("resonance.csv", &table.into_bytes())?;
    summarize(sink, "resonance_summary.json", &outcomes)
}

fn phase_map(cfg: &RunConfig, sink: &ArtifactSink) -> Result<()> {
    let v0 = cfg.v0_list[0];
    let (config, spectrum) = spectrum_for(cfg, v0)?;
    // the multi-well domain needs the same spacing quality as single-well
    let n = cfg.grid_points * cfg.wells.next_power_of_two();
    let spec = GridSpec::new(n, n, cfg.wells, cfg.wells).map_err(|e| anyhow::anyhow!("{e}"))?;
    for &scheme in &cfg.schemes {
        let schedule = build_schedule(cfg, scheme, cfg.total_time)?;
        for (mode_name, mode) in [
            ("localized", InitialLocalization::CentralWell),
            ("delocalized", InitialLocalization::Delocalized),
        ] {
            let report = multi_well_run(&schedule, &config, &spectrum, spec, mode, cfg.dt_grid)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let base = format!("phase_map_{}_{}", scheme.name(), mode_name);
            sink.write(
                &format!("{base}_field.bin"),
                &field_snapshot_bytes(&report.final_state, &config),
            )?;
            sink.write(
                &format!("{base}_argmap.bin"),
                &real_field_bytes(
                    &report.phase_map,
                    spec.nx,
                    spec.ny,
                    spec.wells_x as f64 * config.ell,
                    report.final_state.time,
                ),
            )?;
            let mut wells = CsvTable::new(&["well_x", "well_y", "Lz", "weight"]);
            for w in &report.wells {
                wells.row(&[w.well.0 as f64, w.well.1 as f64, w.lz, w.weight]);
            }
            sink.write(&format!("{base}_wells.csv"), &wells.into_bytes())?;
            let side = serde_json::json!({
                "scheme": scheme.name(),
                "mode": mode_name,
                "v0": v0,
                "total_time": cfg.total_time,
                "wells": cfg.wells,
                "grid": n,
                "leakage": report.leakage,
            });
            sink.write(&format!("{base}.json"), serde_json::to_string_pretty(&side)?.as_bytes())?;
        }
    }
    Ok(())
}
