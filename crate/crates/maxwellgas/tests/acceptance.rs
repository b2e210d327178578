//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! quantity and the wall time.  Exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use maxwellgas::fluid::*;
use maxwellgas::kinetic::*;
use maxwellgas::latticesim::*;
use maxwellgas::transport::*;
use maxwellgas::{KineticConstants, MacroState};

struct Outcome {
    pass: bool,
    detail: String,
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn special_functions() -> Outcome {
    let oracle = |n: i32| simpson(|q| (-0.5 * q * q).exp() * q.powi(n), 0.0, 20.0, 20_000);
    // F(κ) = κ e^{−κ²/2}/D(κ) with D′(0) = 2∫₀^∞ q³ e^{−q²/2} dq.
    let f0_oracle = 1.0 / (2.0 * oracle(3));
    let got = [
        shifted_gaussian_moment(1, 0.0).unwrap(),
        shifted_gaussian_moment(0, 0.0).unwrap(),
        shifted_gaussian_moment(3, 0.0).unwrap(),
        collision_f(0.0).unwrap(),
    ];
    let want = [oracle(1), oracle(0), oracle(3), f0_oracle];
    let closed = [1.0, (PI / 2.0).sqrt(), 2.0, 0.25];
    let err = got.iter().zip(&want).zip(&closed).map(|((g, w), c)| (g - w).abs().max((g - c).abs())).fold(0.0, f64::max);
    Outcome { pass: err < 1e-8, detail: format!("max error {err:.2e} (tol 1e-8)") }
}

fn fourier_positivity() -> Outcome {
    let c = fourier_positivity_certificate();
    let scan = (0..=200_000).map(|i| fourier_bracket(i as f64 * 5e-5)).fold(f64::INFINITY, f64::min);
    let k = KineticConstants::nondimensional();
    let t = table(&k);
    let pass = (c.minimum - 15.0 / 16.0).abs() < 1e-12 && (scan - c.minimum).abs() < 1e-8 && t.lambda_fourier > 0.0;
    Outcome { pass, detail: format!("min {:.15} at kappa {:.6}, lambda_fourier {:.12}", c.minimum, c.argmin_kappa, t.lambda_fourier) }
}

fn mean_free_time_routes() -> Outcome {
    let k = KineticConstants::nondimensional();
    let mut r = Lcg::new(3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let u = [r.uniform(-2.0, 2.0), r.uniform(-2.0, 2.0), r.uniform(-2.0, 2.0)];
        let theta = r.uniform(0.2, 4.0);
        let p = [r.uniform(-4.0, 4.0), r.uniform(-4.0, 4.0), r.uniform(-4.0, 4.0)];
        let s = MacroState::new(r.uniform(0.1, 0.9), u, theta);
        let a = mean_free_time(&s, &p, &k).unwrap();
        let b = mean_free_time_direct(&s, &p, &k, 1e-9).unwrap();
        worst = worst.max((a - b).abs() / a);
    }
    Outcome { pass: worst < 1e-6, detail: format!("max relative difference {worst:.2e} over 20 cases (tol 1e-6)") }
}

fn free_time_normalisation() -> Outcome {
    let k = KineticConstants::nondimensional().with_sigma(2.0).unwrap();
    let kin = Kinetics::new(k);
    let mut r = Lcg::new(11);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let modes: Vec<(f64, f64, f64)> =
            (0..3).map(|_| (r.uniform(-0.1, 0.1), r.uniform(0.5, 3.0), r.uniform(0.0, 2.0 * PI))).collect();
        let base = r.uniform(0.2, 0.7);
        let src = AnalyticField(move |x: &[f64; 3], _t: f64| {
            let w: f64 = modes.iter().map(|(a, q, ph)| a * (q * x[0] + ph).sin()).sum();
            MacroState::new(base * (1.0 + w), [0.0; 3], 1.0)
        });
        let p = [r.uniform(-2.0, 2.0), r.uniform(-1.0, 1.0), 0.0];
        let st = kin.free_time_normalization(&src, &[0.0; 3], &p, 0.0).unwrap();
        worst = worst.max((st.integral - 1.0).abs());
    }
    Outcome { pass: worst < 1e-6, detail: format!("max |integral - 1| {worst:.2e} over 10 profiles (tol 1e-6)") }
}

fn expansion_order() -> Outcome {
    let exact = loglog_slope(&expansion_residuals(TimeSampling::Exact));
    let launch = loglog_slope(&expansion_residuals(TimeSampling::LaunchTime));
    let pass = (exact - 2.0).abs() <= 0.2 && (launch - 2.0).abs() <= 0.2;
    Outcome { pass, detail: format!("slope {exact:.4} (exact time), {launch:.4} (launch time); want 2 +/- 0.2") }
}

fn conservation() -> Outcome {
    let r = conservation_run(1000, 128);
    let pass = r.mass < 1e-13 && r.momentum < 1e-11 && r.energy < 1e-11 && r.max_stress_trace == 0.0;
    Outcome {
        pass,
        detail: format!(
            "mass {:.1e}, momentum {:.1e}, energy {:.1e}, max |tr tau| {:.1e}",
            r.mass, r.momentum, r.energy, r.max_stress_trace
        ),
    }
}

fn stokes_and_scaling() -> Outcome {
    let k = KineticConstants::nondimensional();
    let solver = FluidSolver::new(k, table(&k));
    // Isotropic compression u = −α(x − c) in a closed box: interior faces carry no stress.
    let n = 8;
    let g = Grid::new(&[n; 3], &[0.125; 3], &[Boundary::Reflective; 3]).unwrap();
    let s = FieldState::from_fn(g.clone(), 0.0, |x| {
        MacroState::new(0.5, [-0.3 * (x[0] - 0.5), -0.3 * (x[1] - 0.5), -0.3 * (x[2] - 0.5)], 1.2)
    })
    .unwrap();
    let f = solver.fluxes(&s);
    let interior = |c: usize, axis: usize| {
        let cc = g.coords(c);
        (0..3).all(|a| cc[a] >= 1 && cc[a] + 2 < n || (a != axis && cc[a] >= 1 && cc[a] + 1 < n))
            && cc[axis] >= 1
            && cc[axis] + 2 < n
    };
    let mut iso: f64 = 0.0;
    for axis in 0..3 {
        for c in 0..g.len() {
            if interior(c, axis) {
                for row in f.faces[axis][c].stress {
                    for v in row {
                        iso = iso.max(v.abs());
                    }
                }
            }
        }
    }
    // Fixed shear u_x(y) at two temperatures.
    let g2 = Grid::new(&[16, 16], &[1.0 / 16.0; 2], &[Boundary::Periodic; 2]).unwrap();
    let shear = |theta: f64| {
        FieldState::from_fn(g2.clone(), 0.0, |x| MacroState::new(0.5, [0.2 * (2.0 * PI * x[1]).sin(), 0.0, 0.0], theta))
            .unwrap()
    };
    let a = solver.fluxes(&shear(0.8));
    let b = solver.fluxes(&shear(3.2));
    let mut ratio_err: f64 = 0.0;
    for axis in 0..2 {
        for (fa, fb) in a.faces[axis].iter().zip(&b.faces[axis]) {
            for i in 0..3 {
                for j in 0..3 {
                    let (x, y) = (fa.stress[i][j], fb.stress[i][j]);
                    ratio_err = ratio_err.max((y - 2.0 * x).abs() / x.abs().max(1e-300).max(1e-3));
                }
            }
        }
    }
    Outcome {
        pass: iso < 1e-12 && ratio_err < 1e-12,
        detail: format!("isotropic max |tau| {iso:.1e}, 4x theta stress deviation from 2x {ratio_err:.1e}"),
    }
}

fn dufour() -> Outcome {
    let levels = [16, 32, 64, 128];
    let pts: Vec<(f64, f64)> = levels.iter().map(|&n| (1.0 / n as f64, dufour_error(n).0)).collect();
    let (fine_err, fine_max) = dufour_error(128);
    let slope = loglog_slope(&pts);
    let pass = (slope - 2.0).abs() < 0.2 && fine_max > 1e-3 && fine_err < 1e-3 * fine_max;
    Outcome { pass, detail: format!("slope {slope:.4}, max flux {fine_max:.4e}, error at 128 cells {fine_err:.2e}") }
}

fn covariance() -> Outcome {
    let pts: Vec<(f64, f64)> = [32, 64, 128].iter().map(|&n| (64.0 / n as f64, covariance_error(n))).collect();
    let slope = loglog_slope(&pts);
    Outcome {
        pass: (slope - 2.0).abs() <= 0.3,
        detail: format!(
            "slope {slope:.4} (want 2 +/- 0.3), errors {}",
            pts.iter().map(|p| format!("{:.2e}", p.1)).collect::<Vec<_>>().join(" ")
        ),
    }
}

fn viscous_work() -> Outcome {
    let mut slopes = Vec::new();
    for seed in [1, 2, 3, 4] {
        let pts: Vec<(f64, f64)> =
            [32, 64, 128].iter().map(|&n| (1.0 / n as f64, viscous_work_discrepancy(n, seed))).collect();
        slopes.push(loglog_slope(&pts));
    }
    let pass = slopes.iter().all(|s| (s - 2.0).abs() <= 0.3);
    Outcome {
        pass,
        detail: format!("slopes {}", slopes.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>().join(" ")),
    }
}

fn lattice_chain() -> Outcome {
    let p = LatticeParams::covering(32, 20, 1.0, 6.0, 1.0, 1.0, 1.0).unwrap();
    let mut r = Lcg::new(5);
    let random = |r: &mut Lcg| {
        let f: Vec<SiteFields> = (0..p.sites)
            .map(|_| SiteFields { n: r.uniform(0.1, 0.9), u: r.uniform(-0.3, 0.3), theta: r.uniform(0.7, 1.3) })
            .collect();
        LatticeGasState::from_fields(p, 0.0, &f).unwrap()
    };
    let mut stoch: f64 = 0.0;
    for _ in 0..10 {
        let s = random(&mut r);
        let x = (r.uniform(0.0, 32.0) as usize).min(31);
        let y = (x + 1 + (r.uniform(0.0, 15.0) as usize)) % 32;
        let t = two_point_operator(&s, x, y, 0.05).unwrap();
        for i in 0..t.len() {
            stoch = stoch.max((t[i].iter().sum::<f64>() - 1.0).abs());
            stoch = stoch.max((t.iter().map(|row| row[i]).sum::<f64>() - 1.0).abs());
        }
    }
    let mut s = random(&mut r);
    let t0 = s.totals();
    let mut drift: f64 = 0.0;
    let mut h = s.entropy_total().unwrap();
    let mut monotone = true;
    for _ in 0..500 {
        s = chain_step(&s, 0.05).unwrap();
        let t = s.totals();
        for i in 0..3 {
            drift = drift.max((t[i] - t0[i]).abs() / t0[i].abs().max(1.0));
        }
        let h2 = s.entropy_total().unwrap();
        monotone &= h2 >= h - 1e-13;
        h = h2;
    }
    let u0 = LatticeGasState::uniform(p, 0.4, 0.05, 1.0).unwrap();
    let u1 = chain_step(&u0, 0.05).unwrap();
    let mut fixed: f64 = 0.0;
    for x in 0..p.sites {
        fixed = fixed.max((u1.occupation[x] - u0.occupation[x]).abs());
        for j in 0..p.bins {
            fixed = fixed.max((u1.momentum[x][j] - u0.momentum[x][j]).abs());
        }
    }
    let pass = stoch < 1e-12 && drift < 1e-12 && monotone && fixed < 1e-12;
    Outcome {
        pass,
        detail: format!(
            "row/col sums {stoch:.1e}, totals drift {drift:.1e}, entropy monotone {monotone}, uniform change {fixed:.1e}"
        ),
    }
}

fn lattice_fluid() -> Outcome {
    let c = bump_comparison(0.5);
    let ratio = c.ratio();
    Outcome {
        pass: ratio > 0.5 && ratio < 2.0 && c.entropy_monotone,
        detail: format!(
            "decay rate lattice {:.4e}, fluid {:.4e}, ratio {ratio:.3} (want within factor 2), entropy monotone {}",
            c.lattice_rate, c.fluid_rate, c.entropy_monotone
        ),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 12] = [
        ("special functions at zero", special_functions, Some(Duration::from_secs(1))),
        ("Fourier coefficient positivity", fourier_positivity, Some(Duration::from_secs(1))),
        ("mean free time, two routes", mean_free_time_routes, Some(Duration::from_secs(30))),
        ("free-time density normalisation", free_time_normalisation, Some(Duration::from_secs(10))),
        ("expansion residual order", expansion_order, Some(Duration::from_secs(60))),
        ("fluid conservation", conservation, Some(Duration::from_secs(10))),
        ("Stokes relation and root-theta scaling", stokes_and_scaling, None),
        ("Dufour flux", dufour, None),
        ("Galilean covariance", covariance, Some(Duration::from_secs(60))),
        ("viscous-work grouping", viscous_work, None),
        ("lattice chain invariants", lattice_chain, Some(Duration::from_secs(20))),
        ("lattice-fluid decay rates", lattice_fluid, Some(Duration::from_secs(120))),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = limit.map_or(true, |l| took < l);
        let pass = out.pass && in_time;
        if !pass {
            failures += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        println!(
            "{} {:>2}. {name}: {} [{:.2}s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
