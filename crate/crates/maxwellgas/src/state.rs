//! Shared value types: physical constants, pointwise macroscopic states and
//! their first derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Particle mass, Boltzmann constant, cross-section, lattice spacing and
/// momentum-lattice spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticConstants {
    pub m: f64,
    pub k_b: f64,
    pub sigma: f64,
    pub a: f64,
    pub epsilon: f64,
    /// Set when every constant is one; purely informational.
    pub nondimensional: bool,
}

impl KineticConstants {
    pub fn new(m: f64, k_b: f64, sigma: f64, a: f64, epsilon: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("k_B", k_b), ("sigma", sigma), ("a", a), ("epsilon", epsilon)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        let nondimensional = [m, k_b, sigma, a, epsilon].iter().all(|&v| v == 1.0);
        Ok(Self { m, k_b, sigma, a, epsilon, nondimensional })
    }

    /// The unit system with `m = k_B = σ = a = ε = 1`.
    pub fn nondimensional() -> Self {
        Self { m: 1.0, k_b: 1.0, sigma: 1.0, a: 1.0, epsilon: 1.0, nondimensional: true }
    }

    /// Same constants with a different cross-section.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.m, self.k_b, sigma, self.a, self.epsilon)
    }

    /// Thermal speed `c = (k_B Θ / m)^{1/2}`.
    pub fn thermal_speed(&self, theta: f64) -> f64 {
        (self.k_b * theta / self.m).sqrt()
    }

    /// Peculiar velocity `κ = (k/m − u)/c` of momentum `k` in a gas at `(u, Θ)`.
    pub fn peculiar_velocity(&self, k: &Vec3, u: &Vec3, theta: f64) -> Vec3 {
        let c = self.thermal_speed(theta);
        [(k[0] / self.m - u[0]) / c, (k[1] / self.m - u[1]) / c, (k[2] / self.m - u[2]) / c]
    }
}

/// Density, velocity and temperature at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroState {
    pub rho: f64,
    pub u: Vec3,
    pub theta: f64,
}

impl MacroState {
    pub fn new(rho: f64, u: Vec3, theta: f64) -> Self {
        Self { rho, u, theta }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::Domain(format!("density must be positive, got {}", self.rho)));
        }
        if !(self.theta > 0.0) {
            return Err(Error::Domain(format!("temperature must be positive, got {}", self.theta)));
        }
        Ok(())
    }

    /// The same state seen from a frame moving with velocity `-v`.
    pub fn boosted(&self, v: &Vec3) -> Self {
        Self { rho: self.rho, u: [self.u[0] + v[0], self.u[1] + v[1], self.u[2] + v[2]], theta: self.theta }
    }
}

/// A macroscopic state together with its spatial gradients.
///
/// `grad_u[i][j]` is `∂_j u_i`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LocalGradients {
    pub rho: f64,
    pub u: Vec3,
    pub theta: f64,
    pub grad_rho: Vec3,
    pub grad_u: [Vec3; 3],
    pub grad_theta: Vec3,
}

impl LocalGradients {
    /// A state with all gradients zero.
    pub fn uniform(s: MacroState) -> Self {
        Self { rho: s.rho, u: s.u, theta: s.theta, ..Default::default() }
    }

    pub fn state(&self) -> MacroState {
        MacroState::new(self.rho, self.u, self.theta)
    }

    pub fn divergence(&self) -> f64 {
        self.grad_u[0][0] + self.grad_u[1][1] + self.grad_u[2][2]
    }
}
