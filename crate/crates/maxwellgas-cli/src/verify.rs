//! The invariant suite behind `maxwellgas verify`.
//!
//! Solver and lattice checks run in nondimensional units on fixed scenarios;
//! randomized cases draw from the configured seed.  Only the transport-table
//! check uses the configured constants and quadrature settings.

use std::f64::consts::PI;

use maxwellgas::fluid::{boost, viscous_stress, viscous_work_equivalence, Boundary, FieldState, FluidSolver, Grid};
use maxwellgas::kinetic::{AnalyticField, KineticOptions, Kinetics, TimeSampling};
use maxwellgas::latticesim::{chain_step, two_point_operator, LatticeGasState, LatticeParams, SiteFields};
use maxwellgas::transport::{
    collision_f, fourier_positivity_certificate, lambda_moments, mean_free_time, mean_free_time_direct,
    shifted_gaussian_moment, TransportTable,
};
use maxwellgas::{KineticConstants, MacroState, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::failure::CliError;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

type CheckFn = fn(&mut Ctx) -> maxwellgas::Result<(bool, String)>;

struct Ctx {
    rng: ChaCha8Rng,
    constants: KineticConstants,
    quad_tol: f64,
    kappa_max: f64,
    unit_table: TransportTable,
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}

fn unit_solver(ctx: &Ctx) -> FluidSolver {
    FluidSolver::new(KineticConstants::nondimensional(), ctx.unit_table)
}

fn special_values(_: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let got = [
        shifted_gaussian_moment(0, 0.0)?,
        shifted_gaussian_moment(1, 0.0)?,
        shifted_gaussian_moment(3, 0.0)?,
        collision_f(0.0)?,
    ];
    let want = [(PI / 2.0).sqrt(), 1.0, 2.0, 0.25];
    let err = got.iter().zip(&want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    Ok((err < 1e-8, format!("max error {err:.2e}")))
}

fn fourier_positivity(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let c = fourier_positivity_certificate();
    let t = lambda_moments(&ctx.constants, ctx.quad_tol, ctx.kappa_max)?;
    let pass = c.positive && (c.minimum - 15.0 / 16.0).abs() < 1e-12 && t.lambda_fourier > 0.0 && t.lambda_shear > 0.0;
    Ok((pass, format!("bracket minimum {:.15}, lambda_fourier {:e} at the configured constants", c.minimum, t.lambda_fourier)))
}

fn mean_free_time_routes(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let k = KineticConstants::nondimensional();
    let mut worst: f64 = 0.0;
    for _ in 0..8 {
        let r = &mut ctx.rng;
        let u: Vec3 = [r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)];
        let p: Vec3 = [r.gen_range(-4.0..4.0), r.gen_range(-4.0..4.0), r.gen_range(-4.0..4.0)];
        let s = MacroState::new(r.gen_range(0.1..0.9), u, r.gen_range(0.2..4.0));
        let a = mean_free_time(&s, &p, &k)?;
        let b = mean_free_time_direct(&s, &p, &k, 1e-9)?;
        worst = worst.max((a - b).abs() / a);
    }
    Ok((worst < 1e-6, format!("max relative difference {worst:.2e} over 8 cases")))
}

fn free_time_normalisation(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let kin = Kinetics::new(KineticConstants::nondimensional().with_sigma(2.0)?);
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let r = &mut ctx.rng;
        let modes: Vec<(f64, f64, f64)> =
            (0..3).map(|_| (r.gen_range(-0.1..0.1), r.gen_range(0.5..3.0), r.gen_range(0.0..2.0 * PI))).collect();
        let base = r.gen_range(0.2..0.7);
        let flow = r.gen_range(-0.3..0.3);
        let src = AnalyticField(move |x: &Vec3, _t: f64| {
            let w: f64 = modes.iter().map(|(a, q, ph)| a * (q * x[0] + ph).sin()).sum();
            MacroState::new(base * (1.0 + w), [flow * (1.0 + w), 0.0, 0.0], 1.0 - 0.5 * w)
        });
        let p = [r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0), 0.0];
        let st = kin.free_time_normalization(&src, &[0.0; 3], &p, 0.0)?;
        worst = worst.max((st.integral - 1.0).abs());
    }
    Ok((worst < 1e-6, format!("max |integral - 1| {worst:.2e} over 4 fields")))
}

fn expansion_order(_: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let wavy = |x: &Vec3, t: f64| {
        MacroState::new(
            0.5 * (1.0 + 0.2 * (x[0] + 0.3 * t).sin()),
            [0.1 * x[0].cos(), 0.05, 0.0],
            1.0 + 0.2 * (x[0] - 0.5 * t).cos(),
        )
    };
    let mut pts = Vec::new();
    for sigma in [40.0, 80.0, 160.0, 320.0] {
        let k = KineticConstants::nondimensional().with_sigma(sigma)?;
        let o = KineticOptions { sampling: TimeSampling::Exact, window_factor: 40.0, ..KineticOptions::default() };
        let kin = Kinetics::with_options(k, o);
        let src = AnalyticField(wavy);
        let (x, p) = ([0.3, 0.0, 0.0], [0.7, 0.2, 0.0]);
        let full = kin.fundamental_relation(&src, &x, &p, 0.0)?;
        let first = kin.first_order_expansion(&src, &x, &p, 0.0)?;
        pts.push((1.0 / kin.collision_rate(&wavy(&x, 0.0), &p)?, (full - first).abs()));
    }
    let slope = loglog_slope(&pts);
    Ok(((slope - 2.0).abs() <= 0.2, format!("residual slope {slope:.4} against the mean free time")))
}

fn smooth_1d(n: usize, length: f64) -> maxwellgas::Result<FieldState> {
    let g = Grid::periodic_1d(n, length)?;
    FieldState::from_fn(g, 0.0, |x| {
        let p = 2.0 * PI * x[0] / length;
        MacroState::new(
            0.5 * (1.0 + 0.2 * p.sin()),
            [0.3 + 0.1 * p.cos(), 0.05 * (2.0 * p).sin(), -0.1],
            1.0 + 0.2 * (2.0 * p).sin(),
        )
    })
}

fn fluid_conservation(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let solver = unit_solver(ctx);
    let s0 = smooth_1d(64, 2.0 * PI)?;
    let dt = 0.9 * solver.stable_dt(&s0);
    let (_, rec) = solver.run_steps(&s0, dt, 300)?;
    let a = rec.totals[0].totals;
    let pscale = a.momentum.iter().map(|p| p * p).sum::<f64>().sqrt();
    let (mut dm, mut dp, mut de): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for s in &rec.totals {
        let b = s.totals;
        dm = dm.max((b.mass - a.mass).abs() / a.mass);
        de = de.max((b.energy - a.energy).abs() / a.energy);
        for d in 0..3 {
            dp = dp.max((b.momentum[d] - a.momentum[d]).abs() / pscale);
        }
    }
    let pass = dm < 1e-13 && dp < 1e-11 && de < 1e-11 && rec.max_stress_trace == 0.0;
    Ok((pass, format!("drift mass {dm:.1e}, momentum {dp:.1e}, energy {de:.1e}; max |tr tau| {:.1e}", rec.max_stress_trace)))
}

fn uniform_fixed_point(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let solver = unit_solver(ctx);
    let g = Grid::new(&[8, 6], &[0.1, 0.2], &[Boundary::Periodic, Boundary::Reflective])?;
    let s0 = FieldState::from_fn(g, 0.0, |_| MacroState::new(0.4, [0.3, 0.0, -0.2], 1.5))?;
    let (s, _) = solver.run_steps(&s0, solver.stable_dt(&s0), 20)?;
    let mut e: f64 = 0.0;
    for c in 0..s.grid.len() {
        e = e.max((s.rho[c] - s0.rho[c]).abs()).max((s.theta[c] - s0.theta[c]).abs());
        for d in 0..3 {
            e = e.max((s.u[c][d] - s0.u[c][d]).abs());
        }
    }
    Ok((e < 1e-12, format!("largest change {e:.1e} after 20 steps")))
}

fn stokes_and_scaling(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let lam = ctx.unit_table.lambda_shear;
    let mut iso = [[0.0; 3]; 3];
    for (i, row) in iso.iter_mut().enumerate() {
        row[i] = -0.7;
    }
    let t_iso = viscous_stress(&iso, 1.8, lam);
    let iso_max = t_iso.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let r = &mut ctx.rng;
    let mut g = [[0.0; 3]; 3];
    for row in g.iter_mut() {
        for v in row.iter_mut() {
            *v = r.gen_range(-1.0..1.0);
        }
    }
    let theta = r.gen_range(0.2..5.0);
    let a = viscous_stress(&g, theta, lam);
    let b = viscous_stress(&g, 4.0 * theta, lam);
    let mut dev: f64 = 0.0;
    let mut trace: f64 = 0.0;
    for i in 0..3 {
        trace += a[i][i];
        for j in 0..3 {
            dev = dev.max((b[i][j] - 2.0 * a[i][j]).abs() / a[i][j].abs().max(1e-300));
        }
    }
    let pass = iso_max < 1e-15 && dev < 1e-12 && trace == 0.0;
    Ok((pass, format!("isotropic max |tau| {iso_max:.1e}, trace {trace:.1e}, 4x theta deviation from 2x {dev:.1e}")))
}

fn dufour_error(ctx: &Ctx, n: usize) -> maxwellgas::Result<(f64, f64)> {
    let solver = unit_solver(ctx);
    let theta = 1.3;
    let rho = |x: f64| 0.4 * (1.0 + 0.3 * (2.0 * PI * x).sin());
    let drho = |x: f64| 0.4 * 0.3 * 2.0 * PI * (2.0 * PI * x).cos();
    let g = Grid::periodic_1d(n, 1.0)?;
    let s = FieldState::from_fn(g.clone(), 0.0, |x| MacroState::new(rho(x[0]), [0.0; 3], theta))?;
    let f = solver.fluxes(&s);
    let (mut err, mut biggest): (f64, f64) = (0.0, 0.0);
    for c in 0..g.len() {
        let xf = (c as f64 + 1.0) * g.spacing[0];
        let want = -ctx.unit_table.lambda_dufour * theta.powf(1.5) * drho(xf) / rho(xf);
        let face = &f.faces[0][c];
        let heat = face.energy - face.euler_energy;
        err = err.max((heat - want).abs());
        biggest = biggest.max(heat.abs());
    }
    Ok((err, biggest))
}

fn dufour(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let mut pts = Vec::new();
    for n in [16, 32, 64, 128] {
        pts.push((1.0 / n as f64, dufour_error(ctx, n)?.0));
    }
    let (_, biggest) = dufour_error(ctx, 128)?;
    let slope = loglog_slope(&pts);
    Ok(((slope - 2.0).abs() < 0.2 && biggest > 1e-3, format!("slope {slope:.4}, largest flux {biggest:.3e}")))
}

fn covariance_error(ctx: &Ctx, n: usize) -> maxwellgas::Result<f64> {
    let solver = unit_solver(ctx);
    let length = 64.0;
    let v = [0.5, 0.0, 0.0];
    let g = Grid::periodic_1d(n, length)?;
    let s0 = FieldState::from_fn(g, 0.0, |x| {
        let p = 2.0 * PI * x[0] / length;
        MacroState::new(0.5 * (1.0 + 0.2 * p.sin()), [0.2 * p.cos(), 0.1 * p.sin(), 0.0], 1.0 + 0.1 * (p + 0.4).cos())
    })?;
    let dt = 0.1 * length / n as f64;
    let steps = (16.0 / dt).round() as usize;
    let (direct, _) = solver.run_steps(&s0, dt, steps)?;
    let (moved, _) = solver.run_steps(&boost(&s0, &v)?, dt, steps)?;
    let back = boost(&moved, &[-v[0], -v[1], -v[2]])?;
    let mut e: f64 = 0.0;
    for c in 0..direct.grid.len() {
        e = e.max((direct.rho[c] - back.rho[c]).abs()).max((direct.theta[c] - back.theta[c]).abs());
        for d in 0..3 {
            e = e.max((direct.u[c][d] - back.u[c][d]).abs());
        }
    }
    Ok(e)
}

fn covariance(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let mut pts = Vec::new();
    for n in [32, 64, 128] {
        pts.push((64.0 / n as f64, covariance_error(ctx, n)?));
    }
    let slope = loglog_slope(&pts);
    Ok(((slope - 2.0).abs() <= 0.3, format!("boosted vs direct slope {slope:.4}")))
}

fn viscous_work(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let solver = unit_solver(ctx);
    let r = &mut ctx.rng;
    let modes: Vec<(f64, f64, Vec<f64>, f64)> = (0..5)
        .map(|_| {
            let kx = r.gen_range(0..3) as f64;
            let ky = r.gen_range(-2..3) as f64;
            let amp: Vec<f64> = (0..5).map(|_| r.gen_range(-1.0..1.0)).collect();
            (kx, ky, amp, r.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let field = |x: &Vec3, comp: usize| -> f64 {
        modes
            .iter()
            .map(|(kx, ky, amp, ph)| amp[comp] * (2.0 * PI * (kx * x[0] + ky * x[1]) + ph + comp as f64).sin())
            .sum()
    };
    let mut pts = Vec::new();
    for n in [32, 64, 128] {
        let g = Grid::new(&[n, n], &[1.0 / n as f64; 2], &[Boundary::Periodic; 2])?;
        let s = FieldState::from_fn(g, 0.0, |x| {
            MacroState::new(
                0.5 + 0.05 * field(x, 0),
                [0.2 * field(x, 1), 0.2 * field(x, 2), 0.1 * field(x, 3)],
                1.0 + 0.05 * field(x, 4),
            )
        })?;
        pts.push((1.0 / n as f64, viscous_work_equivalence(&s, &solver)?.max_discrepancy));
    }
    let slope = loglog_slope(&pts);
    Ok(((slope - 2.0).abs() <= 0.3, format!("grouping discrepancy slope {slope:.4}")))
}

fn lattice_invariants(ctx: &mut Ctx) -> maxwellgas::Result<(bool, String)> {
    let p = LatticeParams::covering(24, 20, 1.0, 6.0, 1.0, 1.0, 1.0)?;
    let r = &mut ctx.rng;
    let fields: Vec<SiteFields> = (0..p.sites)
        .map(|_| SiteFields { n: r.gen_range(0.1..0.9), u: r.gen_range(-0.3..0.3), theta: r.gen_range(0.7..1.3) })
        .collect();
    let mut s = LatticeGasState::from_fields(p, 0.0, &fields)?;
    let mut stoch: f64 = 0.0;
    for _ in 0..5 {
        let x = r.gen_range(0..p.sites);
        let y = (x + r.gen_range(1..p.sites)) % p.sites;
        let t = two_point_operator(&s, x, y, 0.05)?;
        for i in 0..t.len() {
            stoch = stoch.max((t[i].iter().sum::<f64>() - 1.0).abs());
            stoch = stoch.max((t.iter().map(|row| row[i]).sum::<f64>() - 1.0).abs());
        }
    }
    let t0 = s.totals();
    let mut h = s.entropy_total()?;
    let (mut drift, mut monotone): (f64, bool) = (0.0, true);
    for _ in 0..100 {
        s = chain_step(&s, 0.05)?;
        let t = s.totals();
        for i in 0..3 {
            drift = drift.max((t[i] - t0[i]).abs() / t0[i].abs().max(1.0));
        }
        let h2 = s.entropy_total()?;
        monotone &= h2 >= h - 1e-13;
        h = h2;
    }
    let u0 = LatticeGasState::uniform(p, 0.4, 0.05, 1.0)?;
    let u1 = chain_step(&u0, 0.05)?;
    let mut fixed: f64 = 0.0;
    for x in 0..p.sites {
        fixed = fixed.max((u1.occupation[x] - u0.occupation[x]).abs());
        for j in 0..p.bins {
            fixed = fixed.max((u1.momentum[x][j] - u0.momentum[x][j]).abs());
        }
    }
    let pass = stoch < 1e-12 && drift < 1e-12 && monotone && fixed < 1e-12;
    Ok((
        pass,
        format!("row/column sums {stoch:.1e}, totals drift {drift:.1e}, entropy monotone {monotone}, uniform change {fixed:.1e}"),
    ))
}

const CHECKS: &[(&str, CheckFn)] = &[
    ("special_values", special_values),
    ("fourier_positivity", fourier_positivity),
    ("mean_free_time_routes", mean_free_time_routes),
    ("free_time_normalisation", free_time_normalisation),
    ("expansion_order", expansion_order),
    ("fluid_conservation", fluid_conservation),
    ("uniform_fixed_point", uniform_fixed_point),
    ("stokes_and_root_theta", stokes_and_scaling),
    ("dufour_flux", dufour),
    ("galilean_covariance", covariance),
    ("viscous_work_grouping", viscous_work),
    ("lattice_invariants", lattice_invariants),
];

/// Run every check.  A library error inside a check counts as a failure of
/// that check; only an unusable configuration aborts the suite.
pub fn run_suite(cfg: &ScenarioConfig) -> Result<Vec<Check>, CliError> {
    let unit_table = lambda_moments(&KineticConstants::nondimensional(), cfg.transport.quad_tol, cfg.transport.kappa_max)?;
    let mut ctx = Ctx {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        constants: cfg.constants,
        quad_tol: cfg.transport.quad_tol,
        kappa_max: cfg.transport.kappa_max,
        unit_table,
    };
    Ok(CHECKS
        .iter()
        .map(|(name, f)| {
            let (pass, detail) = f(&mut ctx).unwrap_or_else(|e| (false, format!("error: {e}")));
            Check { name: name.to_string(), pass, detail }
        })
        .collect())
}
