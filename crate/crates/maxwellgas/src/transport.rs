//! Collision function, mean free time and transport coefficients.
//!
//! Everything here is expressed through the peculiar velocity
//! `κ = (k/m − u)/c` of a particle relative to a Maxwellian gas, where
//! `c = (k_B Θ/m)^{1/2}`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_breaks, try_integrate, try_integrate_breaks, PiecewiseChebyshev, Tolerance};
use crate::state::{norm, KineticConstants, MacroState, Vec3};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_KAPPA_MAX: f64 = 12.0;

/// Below this κ the collision function is taken from its Taylor series.
const SMALL_KAPPA: f64 = 1e-3;

/// Tail length of the Gaussian integrands, in units of the unit variance.
const GAUSS_TAIL: f64 = 16.0;

fn inner_tol() -> Tolerance {
    Tolerance::new(1e-300, 1e-14)
}

/// `I_n(κ) = ∫₀^∞ e^{−(q+κ)²/2} qⁿ dq`.
pub fn shifted_gaussian_moment(n: u32, kappa: f64) -> Result<f64> {
    if n > 3 {
        return Err(Error::Domain(format!("moment order {n} outside 0..=3")));
    }
    let peak = (-kappa).max(0.0);
    let hi = peak + GAUSS_TAIL + n as f64;
    let mut breaks = vec![0.0];
    if peak > 0.0 {
        breaks.push(peak);
    }
    breaks.push(hi);
    let est = integrate_breaks(
        |q| (-0.5 * (q + kappa) * (q + kappa)).exp() * q.powi(n as i32),
        &breaks,
        &inner_tol(),
    )?;
    Ok(est.value)
}

/// `H(κ) = ∫₀^∞ q² e^{−(q−κ)²/2} (1 − e^{−2qκ}) dq = 2κ e^{−κ²/2} ∫₀^∞ q² e^{−q²/2} sinh(qκ)/κ dq`.
fn sinh_moment_shifted(kappa: f64) -> Result<f64> {
    let hi = kappa + GAUSS_TAIL + 2.0;
    let est = integrate_breaks(
        |q| q * q * (-0.5 * (q - kappa) * (q - kappa)).exp() * -(-2.0 * q * kappa).exp_m1(),
        &[0.0, kappa, hi],
        &inner_tol(),
    )?;
    Ok(est.value)
}

/// Collision function `F(κ) = κ e^{−κ²/2} / (I₂(−κ) − I₂(κ))`.
///
/// Evaluated as `κ / (2 ∫ q² e^{−q²/2} sinh(qκ) dq)` so the difference of two
/// nearly equal integrals never forms.
pub fn collision_f(kappa: f64) -> Result<f64> {
    let kappa = check_kappa(kappa)?;
    if kappa < SMALL_KAPPA {
        return Ok(1.0 / (4.0 + 8.0 * kappa * kappa / 3.0));
    }
    Ok(kappa * (-0.5 * kappa * kappa).exp() / sinh_moment_shifted(kappa)?)
}

/// `F(κ) e^{κ²/2}`, which stays finite where `F` itself underflows.
pub fn collision_f_scaled(kappa: f64) -> Result<f64> {
    let kappa = check_kappa(kappa)?;
    if kappa < SMALL_KAPPA {
        return Ok(1.0 / (4.0 + 2.0 * kappa * kappa / 3.0));
    }
    Ok(kappa / sinh_moment_shifted(kappa)?)
}

/// Upper end of the tabulated range of [`collision_f_scaled_fast`].
const TABLE_KAPPA_MAX: f64 = 16.0;

fn scaled_table() -> &'static PiecewiseChebyshev {
    static TABLE: OnceLock<PiecewiseChebyshev> = OnceLock::new();
    TABLE.get_or_init(|| {
        let breaks: Vec<f64> = (0..=64).map(|i| i as f64 * TABLE_KAPPA_MAX / 64.0).collect();
        PiecewiseChebyshev::build(collision_f_scaled, &breaks, 20)
            .expect("collision function quadrature converges on the table range")
    })
}

/// [`collision_f_scaled`] read from a Chebyshev table built on first use.
/// Agrees with the quadrature to roughly machine precision; arguments past
/// the table fall back to quadrature.
pub fn collision_f_scaled_fast(kappa: f64) -> Result<f64> {
    let kappa = check_kappa(kappa)?;
    if kappa <= TABLE_KAPPA_MAX {
        Ok(scaled_table().eval(kappa))
    } else {
        collision_f_scaled(kappa)
    }
}

/// `F` straight from its definition through `I₂(±κ)`.  Loses digits as κ → 0;
/// kept as an independent check on [`collision_f`].
pub fn collision_f_direct(kappa: f64) -> Result<f64> {
    let kappa = check_kappa(kappa)?;
    let d = shifted_gaussian_moment(2, -kappa)? - shifted_gaussian_moment(2, kappa)?;
    Ok(kappa * (-0.5 * kappa * kappa).exp() / d)
}

fn check_kappa(kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!("kappa must be a finite non-negative number, got {kappa}")));
    }
    Ok(kappa)
}

/// Dimensionless moments of `F`, the physical `λ_n`, and the coefficients of
/// the fluid equations built from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportTable {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda_shear: f64,
    pub lambda_fourier: f64,
    pub lambda_dufour: f64,
    pub quad_tol: f64,
    pub kappa_max: f64,
}

impl TransportTable {
    /// Assemble a table from the three dimensionless moments.
    pub fn from_moments(mu: [f64; 3], k: &KineticConstants, quad_tol: f64, kappa_max: f64) -> Self {
        let scale = (k.m / k.sigma) * (k.m / k.k_b).sqrt();
        let [l1, l2, l3] = [scale * mu[0], scale * mu[1], scale * mu[2]];
        Self {
            mu1: mu[0],
            mu2: mu[1],
            mu3: mu[2],
            lambda1: l1,
            lambda2: l2,
            lambda3: l3,
            lambda_shear: k.k_b * l2 / (3.0 * k.m),
            lambda_fourier: k.k_b * k.k_b / k.m * (l3 / 4.0 - 5.0 * l2 / 4.0 + 5.0 * l1 / 2.0),
            lambda_dufour: 5.0 * k.k_b * k.k_b / (2.0 * k.m) * (l1 - l2 / 3.0),
            quad_tol,
            kappa_max,
        }
    }

    /// The same table with shear, Fourier and Dufour coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            lambda_shear: self.lambda_shear * factor,
            lambda_fourier: self.lambda_fourier * factor,
            lambda_dufour: self.lambda_dufour * factor,
            ..*self
        }
    }

    /// Fluid coefficients switched off, leaving the Euler equations.
    pub fn inviscid(&self) -> Self {
        self.scaled(0.0)
    }
}

/// `μ_n = ∫₀^{κ_max} κ^{2n} F(κ) dκ` and everything derived from them.
pub fn lambda_moments(k: &KineticConstants, quad_tol: f64, kappa_max: f64) -> Result<TransportTable> {
    if !(quad_tol > 0.0) {
        return Err(Error::Domain(format!("quad_tol must be positive, got {quad_tol}")));
    }
    if !(kappa_max >= 10.0) || !kappa_max.is_finite() {
        return Err(Error::Domain(format!("kappa_max must be at least 10, got {kappa_max}")));
    }
    let mut breaks: Vec<f64> = [0.0, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0].into_iter().filter(|&b| b < kappa_max).collect();
    breaks.push(kappa_max);
    let tol = Tolerance::new(quad_tol, 0.0);
    let mut mu = [0.0; 3];
    for (i, slot) in mu.iter_mut().enumerate() {
        let p = 2 * (i as i32 + 1);
        *slot = try_integrate_breaks(|x| Ok(x.powi(p) * collision_f(x)?), &breaks, &tol)?.value;
    }
    Ok(TransportTable::from_moments(mu, k, quad_tol, kappa_max))
}

/// Outcome of the check that the Fourier coefficient has a positive integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityCertificate {
    pub positive: bool,
    pub minimum: f64,
    pub argmin_kappa: f64,
}

/// The Fourier coefficient is `∫ κ² F(κ) (5/2 − 5κ²/4 + κ⁴/4) dκ` up to a
/// positive constant; this locates the minimum of the bracket over `κ ≥ 0`.
pub fn fourier_positivity_certificate() -> PositivityCertificate {
    // Quadratic a + b s + c s² in s = κ² ≥ 0.
    let (a, b, c): (f64, f64, f64) = (2.5, -1.25, 0.25);
    let s = (-b / (2.0 * c)).max(0.0);
    let minimum = a + b * s + c * s * s;
    PositivityCertificate { positive: minimum > 0.0, minimum, argmin_kappa: s.sqrt() }
}

/// Evaluates the bracket of [`fourier_positivity_certificate`].
pub fn fourier_bracket(kappa: f64) -> f64 {
    let s = kappa * kappa;
    2.5 - 1.25 * s + 0.25 * s * s
}

fn check_state(s: &MacroState) -> Result<()> {
    if !(s.rho > 0.0) {
        return Err(Error::Domain(format!(
            "mean free time needs a density bounded away from zero, got {}",
            s.rho
        )));
    }
    if !(s.theta > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {}", s.theta)));
    }
    Ok(())
}

/// Mean free time of a particle with momentum `momentum` in the gas `s`.
///
/// From `ρ̄ p̄ t_ℓ = β² F(κ)/(2πσ)` with `p̄` the Maxwellian density at
/// `momentum`; the Gaussian factor of `p̄` is cancelled analytically, leaving
/// `t_ℓ = √(2π) m F(κ) e^{κ²/2} / (σ ρ c)`.
pub fn mean_free_time(s: &MacroState, momentum: &Vec3, k: &KineticConstants) -> Result<f64> {
    check_state(s)?;
    let kappa = norm(&k.peculiar_velocity(momentum, &s.u, s.theta));
    let c = k.thermal_speed(s.theta);
    Ok((2.0 * PI).sqrt() * k.m * collision_f_scaled(kappa)? / (k.sigma * s.rho * c))
}

/// Mean free time as `m² / (σ ρ ∫ d³q |k − q| p̄(q))`, the momentum integral
/// done by nested quadrature in spherical coordinates centred on `k`.
pub fn mean_free_time_direct(s: &MacroState, momentum: &Vec3, k: &KineticConstants, tol: f64) -> Result<f64> {
    check_state(s)?;
    let kappa = k.peculiar_velocity(momentum, &s.u, s.theta);
    let reach = norm(&kappa) + 12.0;
    let norm3 = (2.0 * PI).powf(-1.5);
    let t = Tolerance::new(1e-300, tol);
    // Dimensionless mean relative speed ∫ d³s |s| φ(κ + s) with φ the unit Gaussian.
    let speed = try_integrate(
        |phi| {
            let (sp, cp) = phi.sin_cos();
            try_integrate(
                |th| {
                    let (st, ct) = th.sin_cos();
                    let n = [st * cp, st * sp, ct];
                    let proj = kappa[0] * n[0] + kappa[1] * n[1] + kappa[2] * n[2];
                    let k2 = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
                    let centre = (-proj).max(0.0);
                    let mut breaks = vec![0.0];
                    if centre > 0.0 && centre < reach {
                        breaks.push(centre);
                    }
                    breaks.push(reach);
                    let radial = integrate_breaks(
                        |r| r * r * r * (-0.5 * (k2 + 2.0 * r * proj + r * r)).exp(),
                        &breaks,
                        &t,
                    )?;
                    Ok(st * radial.value)
                },
                0.0,
                PI,
                &t,
            )
            .map(|e| e.value)
        },
        0.0,
        2.0 * PI,
        &t,
    )?
    .value
        * norm3;
    let c = k.thermal_speed(s.theta);
    Ok(k.m / (k.sigma * s.rho * c * speed))
}
