//! Experiments shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::f64::consts::PI;

use maxwellgas::fluid::*;
use maxwellgas::kinetic::*;
use maxwellgas::latticesim::*;
use maxwellgas::transport::{lambda_moments, TransportTable};
use maxwellgas::{KineticConstants, MacroState, Vec3};

pub fn table(k: &KineticConstants) -> TransportTable {
    lambda_moments(k, 1e-10, 12.0).unwrap()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}

/// Small deterministic generator for randomized cases.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((self.0 >> 11) as f64 / (1u64 << 53) as f64)
    }
}

/// Smooth periodic 1-D state with nonzero mean flow.
pub fn smooth_1d(n: usize, length: f64) -> FieldState {
    let g = Grid::periodic_1d(n, length).unwrap();
    FieldState::from_fn(g, 0.0, |x| {
        let p = 2.0 * PI * x[0] / length;
        MacroState::new(
            0.5 * (1.0 + 0.2 * p.sin()),
            [0.3 + 0.1 * p.cos(), 0.05 * (2.0 * p).sin(), -0.1],
            1.0 + 0.2 * (2.0 * p).sin(),
        )
    })
    .unwrap()
}

/// Relative drift of the totals over `steps` steps at the stability limit,
/// with the largest stress trace seen.
pub struct ConservationReport {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub max_stress_trace: f64,
}

pub fn conservation_run(steps: usize, cells: usize) -> ConservationReport {
    let k = KineticConstants::nondimensional();
    let solver = FluidSolver::new(k, table(&k));
    let s0 = smooth_1d(cells, 2.0 * PI);
    let dt = 0.9 * solver.stable_dt(&s0);
    let (_, rec) = solver.run_steps(&s0, dt, steps).unwrap();
    let first = rec.totals[0].totals;
    let mut r = ConservationReport { mass: 0.0, momentum: 0.0, energy: 0.0, max_stress_trace: rec.max_stress_trace };
    let pscale = (first.momentum[0].powi(2) + first.momentum[1].powi(2) + first.momentum[2].powi(2)).sqrt();
    for s in &rec.totals {
        let t = s.totals;
        r.mass = r.mass.max((t.mass - first.mass).abs() / first.mass);
        r.energy = r.energy.max((t.energy - first.energy).abs() / first.energy);
        for d in 0..3 {
            r.momentum = r.momentum.max((t.momentum[d] - first.momentum[d]).abs() / pscale);
        }
    }
    r
}

/// Largest face error of the Dufour flux on `n` cells, for a sinusoidal density
/// at rest with uniform temperature, and the largest face heat flux.
pub fn dufour_error(n: usize) -> (f64, f64) {
    let k = KineticConstants::nondimensional();
    let tab = table(&k);
    let solver = FluidSolver::new(k, tab);
    let length = 1.0;
    let theta = 1.3;
    let rho = |x: f64| 0.4 * (1.0 + 0.3 * (2.0 * PI * x / length).sin());
    let drho = |x: f64| 0.4 * 0.3 * 2.0 * PI / length * (2.0 * PI * x / length).cos();
    let g = Grid::periodic_1d(n, length).unwrap();
    let s = FieldState::from_fn(g.clone(), 0.0, |x| MacroState::new(rho(x[0]), [0.0; 3], theta)).unwrap();
    let f = solver.fluxes(&s);
    let mut err: f64 = 0.0;
    let mut biggest: f64 = 0.0;
    for c in 0..g.len() {
        let xf = (c as f64 + 1.0) * g.spacing[0];
        let want = -tab.lambda_dufour * theta.powf(1.5) * drho(xf) / rho(xf);
        let face = &f.faces[0][c];
        // Uniform temperature and no flow: the whole heat flux is the Dufour part.
        let heat = face.energy - face.euler_energy;
        err = err.max((heat - want).abs());
        biggest = biggest.max(heat.abs());
    }
    (err, biggest)
}

/// L∞ difference between evolving directly and evolving in a boosted frame,
/// then boosting back, on `n` cells.
pub fn covariance_error(n: usize) -> f64 {
    let k = KineticConstants::nondimensional();
    let solver = FluidSolver::new(k, table(&k));
    let length = 64.0;
    let v = [0.5, 0.0, 0.0];
    let t_end = 16.0;
    let g = Grid::periodic_1d(n, length).unwrap();
    let s0 = FieldState::from_fn(g, 0.0, |x| {
        let p = 2.0 * PI * x[0] / length;
        MacroState::new(0.5 * (1.0 + 0.2 * p.sin()), [0.2 * p.cos(), 0.1 * p.sin(), 0.0], 1.0 + 0.1 * (p + 0.4).cos())
    })
    .unwrap();
    let dx = length / n as f64;
    let dt = 0.1 * dx;
    let steps = (t_end / dt).round() as usize;
    let (direct, _) = solver.run_steps(&s0, dt, steps).unwrap();
    let (moved, _) = solver.run_steps(&boost(&s0, &v).unwrap(), dt, steps).unwrap();
    let back = boost(&moved, &[-v[0], -v[1], -v[2]]).unwrap();
    let mut e: f64 = 0.0;
    for c in 0..direct.grid.len() {
        e = e.max((direct.rho[c] - back.rho[c]).abs());
        e = e.max((direct.theta[c] - back.theta[c]).abs());
        for d in 0..3 {
            e = e.max((direct.u[c][d] - back.u[c][d]).abs());
        }
    }
    e
}

/// Random smooth periodic 2-D fields from a few low Fourier modes.
pub fn random_smooth_2d(n: usize, seed: u64) -> FieldState {
    let mut r = Lcg::new(seed);
    let mut modes = Vec::new();
    for _ in 0..5 {
        let kx = (r.uniform(0.0, 3.0).floor()) as f64;
        let ky = (r.uniform(-2.0, 3.0).floor()) as f64;
        let amp: Vec<f64> = (0..5).map(|_| r.uniform(-1.0, 1.0)).collect();
        let phase = r.uniform(0.0, 2.0 * PI);
        modes.push((kx, ky, amp, phase));
    }
    let field = move |x: &Vec3, comp: usize| -> f64 {
        modes
            .iter()
            .map(|(kx, ky, amp, ph)| amp[comp] * (2.0 * PI * (kx * x[0] + ky * x[1]) + ph + comp as f64).sin())
            .sum::<f64>()
    };
    let g = Grid::new(&[n, n], &[1.0 / n as f64; 2], &[Boundary::Periodic; 2]).unwrap();
    FieldState::from_fn(g, 0.0, |x| {
        MacroState::new(
            0.5 + 0.05 * field(x, 0),
            [0.2 * field(x, 1), 0.2 * field(x, 2), 0.1 * field(x, 3)],
            1.0 + 0.05 * field(x, 4),
        )
    })
    .unwrap()
}

pub fn viscous_work_discrepancy(n: usize, seed: u64) -> f64 {
    let k = KineticConstants::nondimensional();
    let solver = FluidSolver::new(k, table(&k));
    viscous_work_equivalence(&random_smooth_2d(n, seed), &solver).unwrap().max_discrepancy
}

/// Decay-rate measurement of a temperature bump in the lattice simulator
/// and in the fluid solver at the same occupation, σ = a² and spacing.
pub struct BumpComparison {
    pub lattice_rate: f64,
    pub fluid_rate: f64,
    pub entropy_monotone: bool,
}

impl BumpComparison {
    pub fn ratio(&self) -> f64 {
        self.lattice_rate / self.fluid_rate
    }
}

/// Peak excess of a temperature profile over its mean.
pub fn peak_excess(theta: &[f64]) -> f64 {
    let mean = theta.iter().sum::<f64>() / theta.len() as f64;
    theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - mean
}

pub fn bump_comparison(n: f64) -> BumpComparison {
    let sites = 128;
    let params = LatticeParams::covering(sites, 24, 1.0, 6.0, 1.0, 1.0, 1.0).unwrap();
    let exp = BumpExperiment { n, theta: 1.0, amplitude: 0.1, width: 6.0, dt: 0.1, steps: 400, record_every: 20 };
    let series = relax_experiment(&params, &exp, &mut UpdateOrder::Sweep).unwrap();
    let entropy_monotone = series.windows(2).all(|w| w[1].entropy_total >= w[0].entropy_total - 1e-12);
    let ts: Vec<f64> = series.iter().map(|s| s.t).collect();
    let ex: Vec<f64> =
        series.iter().map(|s| peak_excess(&s.fields.iter().map(|f| f.theta).collect::<Vec<_>>())).collect();
    let lattice_rate = excess_decay_rate(&ts, &ex).unwrap();

    let k = KineticConstants::nondimensional();
    let solver = FluidSolver::new(k, table(&k));
    // Two fluid cells per site; the same Gaussian sampled at the finer centres.
    let g = Grid::periodic_1d(2 * sites, sites as f64).unwrap();
    let c = 0.5 * sites as f64;
    let s0 = FieldState::from_fn(g, 0.0, |x| {
        let r = (x[0] - c) / exp.width;
        MacroState::new(n * k.m / k.a.powi(3), [0.0; 3], exp.theta * (1.0 + exp.amplitude * (-0.5 * r * r).exp()))
    })
    .unwrap();
    let t_end = exp.dt * exp.steps as f64;
    let control =
        RunControl { t_end, output_interval: Some(exp.dt * exp.record_every as f64), fixed_dt: None, max_steps: 10_000_000 };
    let rec = solver.run(&s0, &control).unwrap();
    let ts: Vec<f64> = rec.snapshots.iter().map(|s| s.t).collect();
    let ex: Vec<f64> = rec.snapshots.iter().map(|s| peak_excess(&s.theta)).collect();
    let fluid_rate = excess_decay_rate(&ts, &ex).unwrap();
    BumpComparison { lattice_rate, fluid_rate, entropy_monotone }
}

/// Residuals `|N p − first-order form|` against `t_ℓ` for a σ sweep.
pub fn expansion_residuals(sampling: TimeSampling) -> Vec<(f64, f64)> {
    let wavy = |x: &Vec3, t: f64| {
        MacroState::new(
            0.5 * (1.0 + 0.2 * (x[0] + 0.3 * t).sin()),
            [0.1 * x[0].cos(), 0.05, 0.0],
            1.0 + 0.2 * (x[0] - 0.5 * t).cos(),
        )
    };
    [40.0, 80.0, 160.0, 320.0]
        .iter()
        .map(|&sigma| {
            let k = KineticConstants::nondimensional().with_sigma(sigma).unwrap();
            let mut o = KineticOptions::default();
            o.sampling = sampling;
            o.window_factor = 40.0;
            let kin = Kinetics::with_options(k, o);
            let src = AnalyticField(wavy);
            let (x, p) = ([0.3, 0.0, 0.0], [0.7, 0.2, 0.0]);
            let np = kin.fundamental_relation(&src, &x, &p, 0.0).unwrap();
            let fo = kin.first_order_expansion(&src, &x, &p, 0.0).unwrap();
            let tl = 1.0 / kin.collision_rate(&wavy(&x, 0.0), &p).unwrap();
            (tl, (np - fo).abs())
        })
        .collect()
}
