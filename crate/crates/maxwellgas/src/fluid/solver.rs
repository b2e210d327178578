use serde::Serialize;

use super::flux::{FaceContext, FluxSet};
use super::state::{Conserved, FieldState, Totals};
use crate::error::{Error, Result};
use crate::state::KineticConstants;
use crate::transport::TransportTable;

pub const DEFAULT_CFL: f64 = 0.4;
pub const DEFAULT_DIFFUSION_NUMBER: f64 = 0.2;

/// Explicit second-order solver for the compressible equations with shear
/// viscosity, Fourier conduction, the Dufour term and viscous work.
#[derive(Debug, Clone)]
pub struct FluidSolver {
    pub constants: KineticConstants,
    pub table: TransportTable,
    pub cfl: f64,
    pub diffusion_number: f64,
}

/// What one step did.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepReport {
    pub dt: f64,
    /// Largest `|trace τ|` seen in either stage.
    pub max_stress_trace: f64,
}

/// How far and how often to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunControl {
    pub t_end: f64,
    /// Snapshot cadence in simulation time; the first and last states are always kept.
    pub output_interval: Option<f64>,
    /// Use this step instead of the stability limit (still checked against it).
    pub fixed_dt: Option<f64>,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalsSample {
    pub t: f64,
    pub totals: Totals,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub snapshots: Vec<FieldState>,
    pub totals: Vec<TotalsSample>,
    pub dt_history: Vec<f64>,
    pub max_stress_trace: f64,
}

impl FluidSolver {
    pub fn new(constants: KineticConstants, table: TransportTable) -> Self {
        Self { constants, table, cfl: DEFAULT_CFL, diffusion_number: DEFAULT_DIFFUSION_NUMBER }
    }

    fn context(&self) -> FaceContext<'_> {
        FaceContext { k: &self.constants, table: &self.table }
    }

    pub fn fluxes(&self, state: &FieldState) -> FluxSet {
        self.context().fluxes(state)
    }

    /// Time derivative of the conserved densities, with the flux set it came from.
    pub fn rhs(&self, state: &FieldState) -> (Conserved, FluxSet) {
        let f = self.fluxes(state);
        let n = state.grid.len();
        let mut d = Conserved { mass: vec![0.0; n], momentum: vec![[0.0; 3]; n], energy: vec![0.0; n] };
        for c in 0..n {
            d.mass[c] = f.divergence_of(state, c, |x| x.mass);
            for i in 0..3 {
                d.momentum[c][i] = f.divergence_of(state, c, |x| x.momentum[i]);
            }
            d.energy[c] = f.divergence_of(state, c, |x| x.energy);
        }
        (d, f)
    }

    /// Largest stable step: the advective limit `CFL / Σ_a (|u_a| + c_s)/Δx_a`
    /// and the parabolic limit `β_d / (ν_max Σ_a Δx_a⁻²)`.
    pub fn stable_dt(&self, state: &FieldState) -> f64 {
        let k = &self.constants;
        let g = &state.grid;
        let inv_dx2: f64 = (0..g.dim).map(|a| g.spacing[a].powi(-2)).sum();
        let cv = 1.5 * k.k_b / k.m;
        let mut adv: f64 = 0.0;
        let mut nu: f64 = 0.0;
        for c in 0..g.len() {
            let th = state.theta[c];
            let cs = (5.0 * k.k_b * th / (3.0 * k.m)).sqrt();
            let rate: f64 = (0..g.dim).map(|a| (state.u[c][a].abs() + cs) / g.spacing[a]).sum();
            adv = adv.max(rate);
            let sq = th.sqrt();
            let viscous = 4.0 / 3.0 * self.table.lambda_shear * sq / state.rho[c];
            let thermal = self.table.lambda_fourier * sq / (state.rho[c] * cv);
            nu = nu.max(viscous.max(thermal));
        }
        let dt_adv = self.cfl / adv;
        let dt_diff = if nu > 0.0 { self.diffusion_number / (nu * inv_dx2) } else { f64::INFINITY };
        dt_adv.min(dt_diff)
    }

    fn axpy(a: &Conserved, s: f64, d: &Conserved) -> Conserved {
        let n = a.mass.len();
        let mut out = a.clone();
        for c in 0..n {
            out.mass[c] += s * d.mass[c];
            for i in 0..3 {
                out.momentum[c][i] += s * d.momentum[c][i];
            }
            out.energy[c] += s * d.energy[c];
        }
        out
    }

    /// One SSP-RK2 step of size `dt`.
    pub fn step(&self, state: &FieldState, dt: f64) -> Result<(FieldState, StepReport)> {
        let limit = self.stable_dt(state);
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-9) {
            return Err(Error::Cfl { dt, limit });
        }
        let k = &self.constants;
        let u0 = state.conserved(k);
        let (d0, f0) = self.rhs(state);
        let u1 = Self::axpy(&u0, dt, &d0);
        let s1 = FieldState::from_conserved(state.grid.clone(), state.t + dt, &u1, k)?;
        let (d1, f1) = self.rhs(&s1);
        let u2 = Self::axpy(&u1, dt, &d1);
        let n = u0.mass.len();
        let mut out = u0;
        for c in 0..n {
            out.mass[c] = 0.5 * (out.mass[c] + u2.mass[c]);
            for i in 0..3 {
                out.momentum[c][i] = 0.5 * (out.momentum[c][i] + u2.momentum[c][i]);
            }
            out.energy[c] = 0.5 * (out.energy[c] + u2.energy[c]);
        }
        let next = FieldState::from_conserved(state.grid.clone(), state.t + dt, &out, k)?;
        let report = StepReport { dt, max_stress_trace: f0.max_stress_trace().max(f1.max_stress_trace()) };
        Ok((next, report))
    }

    /// `n` steps of fixed size `dt`.
    pub fn run_steps(&self, state: &FieldState, dt: f64, n: usize) -> Result<(FieldState, RunRecord)> {
        let k = &self.constants;
        let mut s = state.clone();
        let mut rec = RunRecord {
            snapshots: vec![state.clone()],
            totals: vec![TotalsSample { t: s.t, totals: s.totals(k) }],
            dt_history: Vec::with_capacity(n),
            max_stress_trace: 0.0,
        };
        for _ in 0..n {
            let (next, rep) = self.step(&s, dt)?;
            s = next;
            rec.dt_history.push(rep.dt);
            rec.max_stress_trace = rec.max_stress_trace.max(rep.max_stress_trace);
            rec.totals.push(TotalsSample { t: s.t, totals: s.totals(k) });
        }
        rec.snapshots.push(s.clone());
        Ok((s, rec))
    }

    /// Advance to `control.t_end`, landing exactly on every output time.
    pub fn run(&self, state: &FieldState, control: &RunControl) -> Result<RunRecord> {
        let k = &self.constants;
        let mut s = state.clone();
        let mut rec = RunRecord {
            snapshots: vec![state.clone()],
            totals: vec![TotalsSample { t: s.t, totals: s.totals(k) }],
            dt_history: Vec::new(),
            max_stress_trace: 0.0,
        };
        let t0 = state.t;
        let mut next_output = control.output_interval.map(|dt| t0 + dt);
        let mut steps = 0;
        // Tolerance on hitting an output time, relative to the run length.
        let eps = 1e-12 * (control.t_end - t0).abs().max(1e-300);
        while s.t < control.t_end - eps {
            if steps >= control.max_steps {
                return Err(Error::Domain(format!(
                    "run stopped after {steps} steps at t = {} before reaching {}",
                    s.t, control.t_end
                )));
            }
            let mut dt = control.fixed_dt.unwrap_or_else(|| self.stable_dt(&s));
            let target = next_output.map_or(control.t_end, |t| t.min(control.t_end));
            if s.t + dt > target - eps {
                dt = target - s.t;
            }
            let (next, rep) = self.step(&s, dt)?;
            s = next;
            if (s.t - target).abs() <= eps {
                s.t = target;
            }
            steps += 1;
            rec.dt_history.push(rep.dt);
            rec.max_stress_trace = rec.max_stress_trace.max(rep.max_stress_trace);
            rec.totals.push(TotalsSample { t: s.t, totals: s.totals(k) });
            if let (Some(t_out), Some(interval)) = (next_output, control.output_interval) {
                if s.t >= t_out - eps {
                    if s.t < control.t_end - eps {
                        rec.snapshots.push(s.clone());
                    }
                    next_output = Some(t_out + interval);
                }
            }
        }
        rec.snapshots.push(s);
        Ok(rec)
    }
}
