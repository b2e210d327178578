//! Local thermodynamic equilibrium of the hard-core lattice gas.
//!
//! A site is either empty or holds one particle with momentum on a lattice of
//! spacing `ε`.  The canonical fields `(β, ζ, ξ)` fix the single-site
//! partition function `Z` and the grand value `Ξ = 1 + e^{−ξ} Z`; the mean
//! fields `(N, E, Π)` follow from `log Ξ` by differentiation.  Momentum sums
//! are replaced by Gaussian integrals throughout, and the external potential
//! is zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{dot, KineticConstants, MacroState, Vec3};

/// Canonical description of a site: inverse temperature, momentum conjugate,
/// activity, and the two partition values they determine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LteParams {
    pub beta: f64,
    pub zeta: Vec3,
    pub xi: f64,
    /// Grand partition value `Ξ`.
    pub big_xi: f64,
    /// Single-site partition value `Z`.
    pub z: f64,
}

impl LteParams {
    /// Build from `(β, ζ, ξ)`, filling in `Z` and `Ξ`.
    pub fn new(beta: f64, zeta: Vec3, xi: f64, k: &KineticConstants) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        let z = ln_z(beta, &zeta, k).exp();
        let big_xi = 1.0 + (-xi).exp() * z;
        Ok(Self { beta, zeta, xi, big_xi, z })
    }

    /// Occupation `N = (Ξ − 1)/Ξ`.
    pub fn occupation(&self) -> f64 {
        // e^{−ξ}Z / (1 + e^{−ξ}Z), written to stay accurate when Z is huge.
        let a = (-self.xi).exp() * self.z;
        a / (1.0 + a)
    }
}

fn ln_z(beta: f64, zeta: &Vec3, k: &KineticConstants) -> f64 {
    -3.0 * k.epsilon.ln() + 1.5 * (2.0 * PI * k.m / beta).ln() + k.m * dot(zeta, zeta) / (2.0 * beta)
}

/// Mean fields at a site together with the macroscopic fields they define.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub rho: f64,
    pub u: Vec3,
    pub theta: f64,
    /// Occupation probability per site.
    pub n: f64,
    /// Mean energy per site.
    pub energy: f64,
    /// Mean momentum per site.
    pub momentum: Vec3,
}

impl FieldPoint {
    /// Complete `(ρ, u, Θ)` with the per-site means.
    pub fn new(rho: f64, u: Vec3, theta: f64, k: &KineticConstants) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("density must be positive, got {rho}")));
        }
        if !(theta > 0.0) {
            return Err(Error::Domain(format!("temperature must be positive, got {theta}")));
        }
        let n = rho * k.a.powi(3) / k.m;
        if n >= 1.0 {
            return Err(Error::Domain(format!(
                "occupation N = {n} is not below one particle per site"
            )));
        }
        let energy = n * (1.5 * k.k_b * theta + 0.5 * k.m * dot(&u, &u));
        let momentum = [n * k.m * u[0], n * k.m * u[1], n * k.m * u[2]];
        Ok(Self { rho, u, theta, n, energy, momentum })
    }

    /// Thermal energy per unit mass, `3 k_B Θ / (2m)`.
    pub fn thermal_energy_per_mass(&self, k: &KineticConstants) -> f64 {
        1.5 * k.k_b * self.theta / k.m
    }
}

/// Canonical fields of a site with the given mean fields.
pub fn lte_from_fields(p: &FieldPoint, k: &KineticConstants) -> Result<LteParams> {
    if !(p.theta > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {}", p.theta)));
    }
    let n = p.rho * k.a.powi(3) / k.m;
    if !(n > 0.0) || n >= 1.0 {
        return Err(Error::Domain(format!("occupation N = {n} must lie in (0, 1)")));
    }
    let beta = 1.0 / (k.k_b * p.theta);
    let zeta = [-beta * p.u[0], -beta * p.u[1], -beta * p.u[2]];
    // e^{−ξ} = N / (Z (1 − N)), taken in logarithms.
    let xi = ln_z(beta, &zeta, k) + (-n).ln_1p() - n.ln();
    LteParams::new(beta, zeta, xi, k)
}

/// Mean fields of a site in the canonical state `l`.
pub fn fields_from_lte(l: &LteParams, k: &KineticConstants) -> Result<FieldPoint> {
    if !(l.beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {}", l.beta)));
    }
    let n = l.occupation();
    let u = [-l.zeta[0] / l.beta, -l.zeta[1] / l.beta, -l.zeta[2] / l.beta];
    let theta = 1.0 / (k.k_b * l.beta);
    let energy = n * (1.5 / l.beta + k.m * dot(&l.zeta, &l.zeta) / (2.0 * l.beta * l.beta));
    let momentum = [-k.m * n * l.zeta[0] / l.beta, -k.m * n * l.zeta[1] / l.beta, -k.m * n * l.zeta[2] / l.beta];
    Ok(FieldPoint { rho: k.m * n / k.a.powi(3), u, theta, n, energy, momentum })
}

/// Maxwellian momentum density of a particle at a site, normalised over `d³k`.
///
/// This is `Z^{-1} exp(−β k·k/(2m) − ζ·k)` divided by the momentum cell
/// volume `ε³`; the square is completed so that the value does not depend on `ε`.
pub fn maxwell_pdf(l: &LteParams, momentum: &Vec3, k: &KineticConstants) -> f64 {
    let mu = [-k.m * l.zeta[0] / l.beta, -k.m * l.zeta[1] / l.beta, -k.m * l.zeta[2] / l.beta];
    let d = [momentum[0] - mu[0], momentum[1] - mu[1], momentum[2] - mu[2]];
    (l.beta / (2.0 * PI * k.m)).powf(1.5) * (-l.beta * dot(&d, &d) / (2.0 * k.m)).exp()
}

/// Maxwellian momentum density of the gas `s` at `momentum`, written
/// directly in terms of `(u, Θ)`.
pub fn maxwell_density(s: &MacroState, momentum: &Vec3, k: &KineticConstants) -> f64 {
    let beta = 1.0 / (k.k_b * s.theta);
    let d = [momentum[0] - k.m * s.u[0], momentum[1] - k.m * s.u[1], momentum[2] - k.m * s.u[2]];
    (beta / (2.0 * PI * k.m)).powf(1.5) * (-beta * dot(&d, &d) / (2.0 * k.m)).exp()
}

/// Pressure of `n_particles` hard-core particles in volume `volume`.
pub fn equation_of_state(n_particles: f64, volume: f64, theta: f64, k: &KineticConstants) -> Result<f64> {
    let v0 = k.a.powi(3) * n_particles;
    if !(volume > v0) {
        return Err(Error::Domain(format!("volume {volume} must exceed the excluded volume {v0}")));
    }
    Ok(k.k_b * theta / v0 * n_particles * (v0 / (volume - v0)).ln_1p())
}

/// Van der Waals pressure with no attraction, `N k_B Θ / (V − V₀)`.
pub fn van_der_waals_pressure(n_particles: f64, volume: f64, theta: f64, k: &KineticConstants) -> Result<f64> {
    let v0 = k.a.powi(3) * n_particles;
    if !(volume > v0) {
        return Err(Error::Domain(format!("volume {volume} must exceed the excluded volume {v0}")));
    }
    Ok(n_particles * k.k_b * theta / (volume - v0))
}

/// `−k_B Σ μ log μ` over a normalised discrete distribution.
pub fn entropy(probabilities: &[f64], k_b: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut s = 0.0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p < 0.0 || !p.is_finite() {
            return Err(Error::Domain(format!("probability {i} is {p}")));
        }
        total += p;
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("distribution sums to {total}, not 1")));
    }
    Ok(k_b * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_filling_has_unit_activity() {
        let k = KineticConstants::nondimensional();
        let p = FieldPoint::new(0.5, [0.0; 3], 1.3, &k).unwrap();
        let l = lte_from_fields(&p, &k).unwrap();
        assert!(((-l.xi).exp() * l.z - 1.0).abs() < 1e-14);
        assert_eq!(l.zeta, [0.0; 3]);
        assert!((l.big_xi - (1.0 + (-l.xi).exp() * l.z)).abs() == 0.0);
    }

    #[test]
    fn rest_energy_is_thermal() {
        let k = KineticConstants::nondimensional();
        let l = LteParams::new(2.0, [0.0; 3], 0.4, &k).unwrap();
        let f = fields_from_lte(&l, &k).unwrap();
        assert_eq!(f.u, [0.0; 3]);
        assert!((f.energy / f.n - 1.5 / 2.0).abs() < 1e-15);
        let l2 = LteParams::new(4.0, [0.0; 3], 0.4, &k).unwrap();
        let f2 = fields_from_lte(&l2, &k).unwrap();
        assert!((f2.theta - 0.5 * f.theta).abs() < 1e-15);
    }

    #[test]
    fn overfull_site_rejected() {
        let k = KineticConstants::nondimensional();
        assert!(FieldPoint::new(1.0, [0.0; 3], 1.0, &k).is_err());
        let p = FieldPoint { rho: 1.2, u: [0.0; 3], theta: 1.0, n: 1.2, energy: 0.0, momentum: [0.0; 3] };
        assert!(matches!(lte_from_fields(&p, &k), Err(Error::Domain(_))));
    }

    #[test]
    fn pressure_at_twice_excluded_volume() {
        let k = KineticConstants::nondimensional();
        let p = equation_of_state(10.0, 20.0, 1.5, &k).unwrap();
        assert!((p - 1.5 / 10.0 * 10.0 * 2f64.ln()).abs() < 1e-15);
        assert!(equation_of_state(10.0, 10.0, 1.0, &k).is_err());
    }

    #[test]
    fn entropy_limits() {
        assert_eq!(entropy(&[0.0, 1.0, 0.0], 1.0).unwrap(), 0.0);
        let m = 7;
        let u = vec![1.0 / m as f64; m];
        assert!((entropy(&u, 2.0).unwrap() - 2.0 * (m as f64).ln()).abs() < 1e-14);
        assert!(entropy(&[1.2, -0.2], 1.0).is_err());
        assert!(entropy(&[0.2, 0.2], 1.0).is_err());
    }
}
