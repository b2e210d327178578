//! Running a validated scenario and writing its artifacts.
//!
//! Layout of an output directory:
//!
//! * `transport_table.json` (transport mode)
//! * `snapshots/snapshot_NNNNN.csv` and `run_summary.json` (fluid mode)
//! * `lattice_series.csv` and `run_summary.json` (lattice mode)
//! * `plot/` with column files and `manifest.json` (fluid and lattice modes)
//! * `verify_report.json` (verify mode)
//! * `error.json` after a failure

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use maxwellgas::fluid::{io::write_snapshot_csv, FieldState, FluidSolver, RunControl};
use maxwellgas::latticesim::{
    chain_step_with, write_series_csv, LatticeGasState, LatticeParams, LatticeSample, SiteFields, UpdateOrder,
};
use maxwellgas::transport::{lambda_moments, TransportTable};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Mode, OrderKind, ScenarioConfig};
use crate::failure::CliError;
use crate::plot::emit_plot_data;
use crate::provenance::Provenance;
use crate::verify;

pub const SUMMARY_FILE: &str = "run_summary.json";
pub const TABLE_FILE: &str = "transport_table.json";
pub const SERIES_FILE: &str = "lattice_series.csv";
pub const REPORT_FILE: &str = "verify_report.json";
pub const ERROR_FILE: &str = "error.json";
pub const SNAPSHOT_DIR: &str = "snapshots";
pub const PLOT_DIR: &str = "plot";

/// Write `value` as pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, CliError> {
    fs::File::create(path).map(BufWriter::new).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Remove artifacts of an earlier run so a reused directory only holds this one.
fn clear_previous(out: &Path) -> Result<(), CliError> {
    for f in [SUMMARY_FILE, TABLE_FILE, SERIES_FILE, REPORT_FILE, ERROR_FILE] {
        let p = out.join(f);
        if p.is_file() {
            fs::remove_file(&p)?;
        }
    }
    for d in [SNAPSHOT_DIR, PLOT_DIR] {
        let p = out.join(d);
        if p.is_dir() {
            fs::remove_dir_all(&p)?;
        }
    }
    Ok(())
}

/// The transport table for the configured constants, with the coefficients
/// the configuration switches off set to zero.
pub fn transport_table(cfg: &ScenarioConfig) -> Result<TransportTable, CliError> {
    let t = &cfg.transport;
    let mut table = lambda_moments(&cfg.constants, t.quad_tol, t.kappa_max)?;
    if !t.viscosity {
        table.lambda_shear = 0.0;
    }
    if !t.heat_conduction {
        table.lambda_fourier = 0.0;
        table.lambda_dufour = 0.0;
    }
    Ok(table)
}

/// Run `cfg` and write its artifacts under `out`.  Returns the artifact
/// paths relative to `out`, in the order they were written.
pub fn run_scenario(cfg: &ScenarioConfig, config_text: &str, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    clear_previous(out)?;
    let prov = Provenance::new(config_text, cfg.mode, cfg.seed, &cfg.transport);
    match cfg.mode {
        Mode::Transport => run_transport(cfg, &prov, out),
        Mode::Fluid => {
            let mut files = run_fluid(cfg, &prov, out)?;
            files.extend(emit_plot_data(out)?.into_iter().map(|e| Path::new(PLOT_DIR).join(e.file)));
            files.push(Path::new(PLOT_DIR).join(crate::plot::MANIFEST_FILE));
            Ok(files)
        }
        Mode::Lattice => {
            let mut files = run_lattice(cfg, &prov, out)?;
            files.extend(emit_plot_data(out)?.into_iter().map(|e| Path::new(PLOT_DIR).join(e.file)));
            files.push(Path::new(PLOT_DIR).join(crate::plot::MANIFEST_FILE));
            Ok(files)
        }
        Mode::Verify => run_verify(cfg, &prov, out),
    }
}

fn run_transport(cfg: &ScenarioConfig, prov: &Provenance, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let table = transport_table(cfg)?;
    let mut doc = serde_json::to_value(table)?;
    doc.as_object_mut().expect("table serialises to an object").insert("provenance".into(), serde_json::to_value(prov)?);
    write_json(&out.join(TABLE_FILE), &doc)?;
    Ok(vec![TABLE_FILE.into()])
}

fn run_fluid(cfg: &ScenarioConfig, prov: &Provenance, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let gs = cfg.grid.as_ref().expect("fluid configs carry a grid");
    let profile = cfg.initial.as_ref().expect("fluid configs carry a profile");
    let run = cfg.run.expect("fluid configs carry a run block");
    let grid = gs.grid();
    let lengths = gs.lengths();
    let s0 = FieldState::from_fn(grid.clone(), 0.0, |x| profile.sample(x, grid.dim, &lengths))?;

    let table = transport_table(cfg)?;
    let mut solver = FluidSolver::new(cfg.constants, table);
    solver.cfl = run.cfl;
    let control = RunControl { t_end: run.t_end, output_interval: run.output_interval, fixed_dt: run.dt, max_steps: run.max_steps };
    let rec = solver.run(&s0, &control)?;

    let snap_dir = out.join(SNAPSHOT_DIR);
    fs::create_dir_all(&snap_dir)?;
    let mut files = Vec::new();
    let mut listed = Vec::new();
    for (i, s) in rec.snapshots.iter().enumerate() {
        let rel = Path::new(SNAPSHOT_DIR).join(format!("snapshot_{i:05}.csv"));
        let mut w = create(&out.join(&rel))?;
        let mut lines = prov.lines();
        lines.push(format!("snapshot {i} t {}", maxwellgas::fluid::io::fmt_f64(s.t)));
        write_snapshot_csv(&mut w, s, &lines)?;
        w.flush()?;
        listed.push(json!({"file": rel.to_string_lossy(), "t": s.t}));
        files.push(rel);
    }
    let totals: Vec<Value> = rec
        .totals
        .iter()
        .map(|s| json!({"t": s.t, "mass": s.totals.mass, "momentum": s.totals.momentum, "energy": s.totals.energy}))
        .collect();
    let summary = json!({
        "provenance": prov,
        "kind": "fluid",
        "dimension": grid.dim,
        "cells": gs.cells,
        "length": gs.length,
        "profile": profile.name(),
        "transport": table,
        "steps": rec.dt_history.len(),
        "snapshots": listed,
        "totals": totals,
        "dt_history": rec.dt_history,
        "max_stress_trace": rec.max_stress_trace,
    });
    write_json(&out.join(SUMMARY_FILE), &summary)?;
    files.push(SUMMARY_FILE.into());
    Ok(files)
}

/// One stretch of equal lattice steps ending on an output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub dt: f64,
    pub steps: usize,
    pub end: f64,
}

/// Split `[0, t_end]` at every output time and fill each stretch with the
/// fewest equal steps no longer than `dt_max`.
pub fn lattice_schedule(t_end: f64, dt_max: f64, output_interval: Option<f64>) -> Vec<Segment> {
    let interval = output_interval.unwrap_or(t_end);
    let mut out = Vec::new();
    let mut start = 0.0;
    let mut i = 1;
    while start < t_end * (1.0 - 1e-12) {
        let mut end = (i as f64 * interval).min(t_end);
        if t_end - end <= 1e-12 * t_end {
            end = t_end;
        }
        let steps = (((end - start) / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        out.push(Segment { dt: (end - start) / steps as f64, steps, end });
        start = end;
        i += 1;
    }
    out
}

fn run_lattice(cfg: &ScenarioConfig, prov: &Provenance, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let k = cfg.constants;
    let gs = cfg.grid.as_ref().expect("lattice configs carry a grid");
    let profile = cfg.initial.as_ref().expect("lattice configs carry a profile");
    let run = cfg.run.expect("lattice configs carry a run block");
    let grid = gs.grid();
    let lengths = gs.lengths();
    let sites = gs.cells[0];
    let fields: Vec<SiteFields> = (0..sites)
        .map(|x| {
            let s = profile.sample(&grid.center(x), 1, &lengths);
            SiteFields { n: s.rho * k.a.powi(3) / k.m, u: s.u[0], theta: s.theta }
        })
        .collect();
    let theta_ref = fields.iter().map(|f| f.theta).fold(0.0, f64::max);
    let lat = cfg.lattice;
    let params = LatticeParams::covering(sites, lat.bins, theta_ref, lat.half_width, k.m, k.k_b, k.a)?;
    // Every pair weight is at most dt |k_max| / (m a), whatever the state.
    let kmax = params.momentum(lat.bins - 1).abs();
    let dt_max = run.dt.unwrap_or(run.cfl * k.m * k.a / kmax);
    let schedule = lattice_schedule(run.t_end, dt_max, run.output_interval);
    let steps: usize = schedule.iter().map(|s| s.steps).sum();
    if steps > run.max_steps {
        return Err(CliError::Config(vec![format!(
            "the lattice run needs {steps} steps, more than run.max_steps = {}",
            run.max_steps
        )]));
    }
    let mut order = match lat.order {
        OrderKind::Sweep => UpdateOrder::Sweep,
        OrderKind::Random => UpdateOrder::seeded(cfg.seed),
    };

    let mut s = LatticeGasState::from_fields(params, 0.0, &fields)?;
    let mut samples = vec![LatticeSample { t: s.t, fields: s.fields(), entropy_total: s.entropy_total()? }];
    for seg in &schedule {
        for _ in 0..seg.steps {
            s = chain_step_with(&s, seg.dt, &mut order)?;
        }
        // Land exactly on the output time rather than on the summed steps.
        s.t = seg.end;
        samples.push(LatticeSample { t: s.t, fields: s.fields(), entropy_total: s.entropy_total()? });
    }

    let mut w = create(&out.join(SERIES_FILE))?;
    write_series_csv(&mut w, &samples, k.a, &prov.lines())?;
    w.flush()?;
    let listed: Vec<Value> = samples.iter().map(|s| json!({"t": s.t, "entropy_total": s.entropy_total})).collect();
    let totals = s.totals();
    let summary = json!({
        "provenance": prov,
        "kind": "lattice",
        "series": SERIES_FILE,
        "sites": sites,
        "bins": lat.bins,
        "dk": params.dk,
        "dt_max": dt_max,
        "steps": steps,
        "segments": schedule.iter().map(|g| json!({"dt": g.dt, "steps": g.steps, "end": g.end})).collect::<Vec<_>>(),
        "order": match lat.order { OrderKind::Sweep => "sweep", OrderKind::Random => "random" },
        "profile": profile.name(),
        "samples": listed,
        "final_totals": {"occupation": totals[0], "momentum": totals[1], "energy": totals[2]},
    });
    write_json(&out.join(SUMMARY_FILE), &summary)?;
    Ok(vec![SERIES_FILE.into(), SUMMARY_FILE.into()])
}

fn run_verify(cfg: &ScenarioConfig, prov: &Provenance, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let checks = verify::run_suite(cfg)?;
    let passed = checks.iter().all(|c| c.pass);
    let report = json!({ "provenance": prov, "passed": passed, "checks": checks });
    write_json(&out.join(REPORT_FILE), &report)?;
    if !passed {
        let failed = checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        return Err(CliError::Verification(failed));
    }
    Ok(vec![REPORT_FILE.into()])
}
