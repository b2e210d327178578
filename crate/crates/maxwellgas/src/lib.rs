//! Statistical dynamics of a hard-core lattice gas.
//!
//! The crate is organised bottom-up:
//!
//! * [`thermostatics`]: local-equilibrium states, Maxwellians, entropy and the
//!   lattice equation of state.
//! * [`transport`]: the collision function `F(κ)`, the moments `μ_n` and the
//!   shear, Fourier and Dufour coefficients built from them.
//! * [`kinetic`]: collision rate, survival probability and free-time density
//!   along straight characteristics, the non-local fundamental relation and its
//!   first-order δ-moments.
//! * [`fluid`]: an explicit conservative solver for compressible flow with
//!   shear viscosity, Fourier conduction, the Dufour term and viscous work.
//! * [`latticesim`]: a mean-field bistochastic Markov chain on a 1-D lattice.
//!
//! [`quadrature`] holds the adaptive integrators and spectral interpolants the
//! rest of the crate leans on.

// Negated float comparisons are used on purpose so NaN takes the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fluid;
pub mod kinetic;
pub mod latticesim;
pub mod quadrature;
pub mod state;
pub mod thermostatics;
pub mod transport;

pub use error::{Error, Result};

/// Version of this library, recorded in artifact provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use state::{KineticConstants, LocalGradients, MacroState, Vec3};
