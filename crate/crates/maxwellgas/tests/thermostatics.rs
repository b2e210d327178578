//! Canonical and mean-field descriptions of a site, Maxwellian moments and
//! the equation of state.

use maxwellgas::quadrature::{integrate, Tolerance};
use maxwellgas::thermostatics::*;
use maxwellgas::KineticConstants;

/// Solve `N(ξ) = n` by bisection on the activity, with nothing but `LteParams::occupation`.
fn bisect_xi(beta: f64, zeta: [f64; 3], n: f64, k: &KineticConstants) -> f64 {
    let (mut lo, mut hi) = (-200.0, 200.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let occ = LteParams::new(beta, zeta, mid, k).unwrap().occupation();
        // Occupation falls as ξ grows.
        if occ > n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn activity_matches_bisection() {
    let k = KineticConstants::new(1.3, 0.8, 1.0, 0.9, 0.4).unwrap();
    for (rho, u, theta) in [(0.2, [0.0; 3], 1.0), (0.9, [0.3, -1.0, 0.2], 0.4), (1.5, [2.0, 0.0, 0.0], 3.0)] {
        let p = FieldPoint::new(rho, u, theta, &k).unwrap();
        let l = lte_from_fields(&p, &k).unwrap();
        let xi = bisect_xi(l.beta, l.zeta, p.n, &k);
        assert!((l.xi - xi).abs() < 1e-9, "{} vs {}", l.xi, xi);
    }
}

#[test]
fn fields_roundtrip_through_lte() {
    let k = KineticConstants::nondimensional();
    let p = FieldPoint::new(0.37, [0.4, -0.2, 0.9], 2.2, &k).unwrap();
    let back = fields_from_lte(&lte_from_fields(&p, &k).unwrap(), &k).unwrap();
    assert!((back.rho - p.rho).abs() < 1e-14);
    assert!((back.theta - p.theta).abs() < 1e-14);
    assert!((back.energy - p.energy).abs() < 1e-14);
    for i in 0..3 {
        assert!((back.u[i] - p.u[i]).abs() < 1e-14);
        assert!((back.momentum[i] - p.momentum[i]).abs() < 1e-14);
    }
}

#[test]
fn full_occupation_is_rejected() {
    let k = KineticConstants::nondimensional();
    assert!(FieldPoint::new(1.0, [0.0; 3], 1.0, &k).is_err());
    assert!(FieldPoint::new(0.5, [0.0; 3], 0.0, &k).is_err());
}

#[test]
fn maxwellian_moments_by_quadrature() {
    let k = KineticConstants::new(2.0, 1.0, 1.0, 1.0, 0.3).unwrap();
    let p = FieldPoint::new(0.5, [0.3, 0.0, -0.1], 1.5, &k).unwrap();
    let l = lte_from_fields(&p, &k).unwrap();
    // The density factorises; integrate one axis at a time with the others at their means.
    let sd = (k.m * k.k_b * p.theta).sqrt();
    let tol = Tolerance::new(1e-14, 1e-13);
    let mean = [k.m * p.u[0], k.m * p.u[1], k.m * p.u[2]];
    let centre = |i: usize, x: f64| {
        let mut q = mean;
        q[i] = x;
        q
    };
    let peak = maxwell_pdf(&l, &mean, &k);
    for i in 0..3 {
        let lo = mean[i] - 14.0 * sd;
        let hi = mean[i] + 14.0 * sd;
        let m0 = integrate(|x| maxwell_pdf(&l, &centre(i, x), &k), lo, hi, &tol).unwrap().value;
        let m1 = integrate(|x| x * maxwell_pdf(&l, &centre(i, x), &k), lo, hi, &tol).unwrap().value;
        let m2 = integrate(|x| (x - mean[i]).powi(2) * maxwell_pdf(&l, &centre(i, x), &k), lo, hi, &tol)
            .unwrap()
            .value;
        // One-dimensional marginal at the peak of the other two directions.
        let marginal = peak * (2.0 * std::f64::consts::PI).sqrt() * sd;
        assert!((m0 / marginal - 1.0).abs() < 1e-12);
        assert!((m1 / m0 - mean[i]).abs() < 1e-12);
        assert!((m2 / m0 - sd * sd).abs() < 1e-11);
    }
}

#[test]
fn momentum_spacing_cancels_in_the_density() {
    let a = KineticConstants::new(1.0, 1.0, 1.0, 1.0, 0.01).unwrap();
    let b = KineticConstants::new(1.0, 1.0, 1.0, 1.0, 5.0).unwrap();
    let p = FieldPoint::new(0.3, [0.1, 0.2, 0.3], 0.7, &a).unwrap();
    let la = lte_from_fields(&p, &a).unwrap();
    let lb = lte_from_fields(&p, &b).unwrap();
    let q = [0.4, -0.5, 0.2];
    assert!((maxwell_pdf(&la, &q, &a) - maxwell_pdf(&lb, &q, &b)).abs() < 1e-15);
    assert!((la.occupation() - lb.occupation()).abs() < 1e-15);
}

#[test]
fn pressure_reduces_to_ideal_gas_when_dilute() {
    let k = KineticConstants::nondimensional();
    let (n, theta) = (10.0, 1.7);
    let v = 1e7;
    let p = equation_of_state(n, v, theta, &k).unwrap();
    assert!((p / (n * theta / v) - 1.0).abs() < 1e-5);
    // Hard-core pressure never exceeds the van der Waals value.
    let dense = equation_of_state(n, 12.0, theta, &k).unwrap();
    assert!(dense < van_der_waals_pressure(n, 12.0, theta, &k).unwrap());
    assert!(equation_of_state(n, 10.0, theta, &k).is_err());
}

#[test]
fn entropy_values() {
    assert!((entropy(&[0.5, 0.5], 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
    assert_eq!(entropy(&[1.0, 0.0], 2.0).unwrap(), 0.0);
    assert!(entropy(&[0.7, 0.7], 1.0).is_err());
    assert!(entropy(&[1.2, -0.2], 1.0).is_err());
}
