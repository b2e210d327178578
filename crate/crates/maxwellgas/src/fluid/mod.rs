//! Explicit conservative solver for the compressible equations with
//! temperature: Euler fluxes, traceless viscous stress, Fourier conduction,
//! the Dufour term and viscous work.
//!
//! Fields live at cell centres.  Face fluxes use the average of the two
//! adjacent Euler fluxes, compact differences normal to the face and averaged
//! central differences along it; time stepping is two-stage SSP Runge–Kutta.

mod boost;
mod diagnostics;
mod flux;
mod grid;
pub mod io;
mod solver;
mod state;

pub use boost::boost;
pub use diagnostics::{viscous_work_equivalence, ViscousWorkComparison};
pub use flux::{euler_flux, heat_flux, short_euler_rhs, viscous_stress, EulerFlux, FaceFlux, FluxSet, MaterialRates};
pub use grid::{Boundary, Grid, Neighbor};
pub use solver::{
    FluidSolver, RunControl, RunRecord, StepReport, TotalsSample, DEFAULT_CFL, DEFAULT_DIFFUSION_NUMBER,
};
pub use state::{Conserved, FieldState, Totals};
