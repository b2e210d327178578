use super::grid::Boundary;
use super::solver::FluidSolver;
use super::state::FieldState;
use crate::error::{Error, Result};
use crate::state::Vec3;

/// The viscous-work contribution to `∂_t E`, computed two ways.
#[derive(Debug, Clone)]
pub struct ViscousWorkComparison {
    /// `∂_j A_j` with `A_j = λΘ^{1/2}(−⅔u_j∂_iu_i + u_i∂_iu_j + ½∂_j(u_iu_i))`,
    /// each factor by central differences at cell centres.
    pub grouped: Vec<f64>,
    /// Divergence of the `u_iτ_ij` part of the solver's face fluxes.
    pub face_flux: Vec<f64>,
    pub max_discrepancy: f64,
}

/// Compare the expanded viscous-work terms of the energy equation with the
/// `u_iτ_ij` grouping the solver integrates.  Both are second-order
/// approximations of the same quantity, so the discrepancy is `O(Δx²)`.
pub fn viscous_work_equivalence(state: &FieldState, solver: &FluidSolver) -> Result<ViscousWorkComparison> {
    let g = &state.grid;
    if (0..g.dim).any(|a| g.boundary[a] != Boundary::Periodic) {
        return Err(Error::Domain("viscous-work comparison needs a periodic grid".into()));
    }
    let n = g.len();
    let lam = solver.table.lambda_shear;
    let grads: Vec<_> = (0..n).map(|c| state.local_gradients(c)).collect();
    let u2: Vec<f64> = state.u.iter().map(|u| u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).collect();
    let central = |f: &dyn Fn(usize) -> f64, c: usize, a: usize| -> f64 {
        let p = match g.neighbor(c, a, 1) {
            super::grid::Neighbor::Cell(j) => j,
            super::grid::Neighbor::Wall => unreachable!("periodic grid"),
        };
        let m = match g.neighbor(c, a, -1) {
            super::grid::Neighbor::Cell(j) => j,
            super::grid::Neighbor::Wall => unreachable!("periodic grid"),
        };
        (f(p) - f(m)) / (2.0 * g.spacing[a])
    };
    let mut vector: Vec<Vec3> = vec![[0.0; 3]; n];
    for c in 0..n {
        let gr = &grads[c];
        let u = state.u[c];
        let div = gr.divergence();
        let s = lam * state.theta[c].sqrt();
        for j in 0..g.dim {
            let adv = u[0] * gr.grad_u[j][0] + u[1] * gr.grad_u[j][1] + u[2] * gr.grad_u[j][2];
            let du2 = central(&|i| u2[i], c, j);
            vector[c][j] = s * (-2.0 / 3.0 * u[j] * div + adv + 0.5 * du2);
        }
    }
    let grouped: Vec<f64> = (0..n).map(|c| (0..g.dim).map(|j| central(&|i| vector[i][j], c, j)).sum()).collect();
    let fluxes = solver.fluxes(state);
    let face_flux: Vec<f64> = (0..n).map(|c| fluxes.divergence_of(state, c, |f| f.viscous_work)).collect();
    let max_discrepancy = grouped.iter().zip(&face_flux).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(ViscousWorkComparison { grouped, face_flux, max_discrepancy })
}
