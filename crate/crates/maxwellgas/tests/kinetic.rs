//! Free-time density, the non-local phase-density relation and its
//! first-order form, and the first-order moment differences.

mod common;

use maxwellgas::fluid::{FieldState, Grid};
use maxwellgas::kinetic::*;
use maxwellgas::transport::{lambda_moments, mean_free_time};
use maxwellgas::{Error, KineticConstants, LocalGradients, MacroState, Vec3};

fn wavy(x: &Vec3, t: f64) -> MacroState {
    MacroState::new(
        0.5 * (1.0 + 0.2 * (x[0] + 0.3 * t).sin()),
        [0.1 * x[0].cos(), 0.05, 0.0],
        1.0 + 0.2 * (x[0] - 0.5 * t).cos(),
    )
}

#[test]
fn uniform_gas_is_its_own_thermalised_density() {
    let k = KineticConstants::nondimensional();
    let kin = Kinetics::new(k);
    let s = MacroState::new(0.4, [0.2, 0.0, -0.1], 1.1);
    let src = UniformField(s);
    let p = [0.5, 0.3, -0.2];
    let np = kin.fundamental_relation(&src, &[0.0; 3], &p, 0.0).unwrap();
    let bar = kin.phase_density(&s, &p);
    assert!((np / bar - 1.0).abs() < 1e-6, "{np} vs {bar}");
    let fo = kin.first_order_expansion(&src, &[0.0; 3], &p, 0.0).unwrap();
    assert!((fo / bar - 1.0).abs() < 1e-12);
}

#[test]
fn free_time_density_is_normalised_with_exact_mean() {
    let k = KineticConstants::nondimensional();
    let kin = Kinetics::new(k);
    let s = MacroState::new(0.3, [0.0; 3], 1.0);
    let src = UniformField(s);
    let p = [0.8, 0.0, 0.0];
    let st = kin.free_time_normalization(&src, &[0.0; 3], &p, 0.0).unwrap();
    assert!((st.integral - 1.0).abs() < 1e-6);
    let tl = mean_free_time(&s, &p, &k).unwrap();
    assert!((st.mean / tl - 1.0).abs() < 1e-5);
    assert!(st.remainder <= (-kin.options.window_factor).exp() * 1.0001);
}

#[test]
fn free_time_density_normalised_on_varying_gas() {
    let k = KineticConstants::nondimensional().with_sigma(4.0).unwrap();
    let kin = Kinetics::new(k);
    let src = AnalyticField(wavy);
    let st = kin.free_time_normalization(&src, &[0.4, 0.0, 0.0], &[1.0, 0.0, 0.0], 0.0).unwrap();
    assert!((st.integral - 1.0).abs() < 1e-6);
}

#[test]
fn short_window_fails_normalisation() {
    let k = KineticConstants::nondimensional();
    let mut o = KineticOptions::default();
    o.window_factor = 5.0;
    let kin = Kinetics::with_options(k, o);
    let src = UniformField(MacroState::new(0.3, [0.0; 3], 1.0));
    let r = kin.free_time_normalization(&src, &[0.0; 3], &[0.0; 3], 0.0);
    assert!(matches!(r, Err(Error::Normalization { .. })), "{r:?}");
}

#[test]
fn survival_rejects_negative_time() {
    let kin = Kinetics::new(KineticConstants::nondimensional());
    let src = UniformField(MacroState::new(0.3, [0.0; 3], 1.0));
    assert!(kin.survival(&src, &[0.0; 3], &[0.0; 3], 0.0, -1.0).is_err());
}

#[test]
fn exact_sampling_expansion_is_second_order() {
    let s = common::loglog_slope(&common::expansion_residuals(TimeSampling::Exact));
    assert!((s - 2.0).abs() < 0.2, "slope {s}");
}

#[test]
fn trajectory_feeds_the_relation() {
    let k = KineticConstants::nondimensional().with_sigma(40.0).unwrap();
    let g = Grid::periodic_1d(64, 2.0 * std::f64::consts::PI).unwrap();
    let snaps: Vec<FieldState> =
        (0..=10).map(|i| FieldState::from_fn(g.clone(), -1.0 + 0.1 * i as f64, |x| wavy(x, -1.0 + 0.1 * i as f64)).unwrap()).collect();
    let traj = FieldTrajectory::new(snaps).unwrap();
    traj.check_lookback(0.0, 16.0, &k).unwrap();
    assert!(traj.check_lookback(-0.5, 16.0, &k).is_err());
    let kin = Kinetics::new(k);
    let (x, p) = ([1.0, 0.0, 0.0], [0.4, 0.0, 0.0]);
    let from_grid = kin.fundamental_relation(&traj, &x, &p, 0.0).unwrap();
    let analytic = kin.fundamental_relation(&AnalyticField(wavy), &x, &p, 0.0).unwrap();
    // Limited by linear interpolation on the grid.
    assert!((from_grid / analytic - 1.0).abs() < 5e-3);
}

fn random_gradients(seed: u64) -> LocalGradients {
    let mut r = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        r = r.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((r >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    let mut g = LocalGradients::uniform(MacroState::new(0.5 + 0.3 * next(), [next(), next(), next()], 1.0 + 0.5 * next()));
    for i in 0..3 {
        g.grad_rho[i] = next();
        g.grad_theta[i] = next();
        for j in 0..3 {
            g.grad_u[i][j] = next();
        }
    }
    g
}

#[test]
fn delta_moments_satisfy_the_energy_identity() {
    // (3k_B/2m) δ(ρΘ) = a⁻³δE − u·δϖ + u² δρ / 2
    let k = KineticConstants::nondimensional();
    let table = lambda_moments(&k, 1e-10, 12.0).unwrap();
    for seed in 0..20 {
        let g = random_gradients(seed);
        let d = delta_moments(&g, &table, &k);
        let u = g.u;
        let lhs = 1.5 * k.k_b / k.m * d.delta_rho_theta;
        let rhs = d.delta_energy - (u[0] * d.delta_momentum[0] + u[1] * d.delta_momentum[1] + u[2] * d.delta_momentum[2])
            + 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) * d.delta_rho;
        assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()), "seed {seed}: {lhs} vs {rhs}");
    }
}

#[test]
fn pure_temperature_gradient_shifts_momentum_only() {
    let k = KineticConstants::nondimensional();
    let table = lambda_moments(&k, 1e-10, 12.0).unwrap();
    let mut g = LocalGradients::uniform(MacroState::new(0.5, [0.0; 3], 2.0));
    g.grad_theta = [0.4, 0.0, 0.0];
    let d = delta_moments(&g, &table, &k);
    assert_eq!(d.delta_rho, 0.0);
    assert_eq!(d.delta_rho_theta, 0.0);
    // δϖ_x = −(λ₂/3)∂_x Θ^{1/2} plus the pressure-driven ∂₀u term.
    let dsq = 0.5 / 2f64.sqrt() * 0.4;
    let dt_u = -0.4; // −(k_B/ρm)∂(ρΘ) with ρ∂Θ only
    let want = -table.lambda2 / 3.0 * dsq - table.lambda1 * (2f64.powf(-0.5) * dt_u);
    assert!((d.delta_momentum[0] - want).abs() < 1e-14);
}
