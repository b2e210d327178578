use rayon::prelude::*;
use serde::Serialize;

use super::grid::Neighbor;
use super::state::FieldState;
use crate::state::{dot, KineticConstants, LocalGradients, MacroState, Vec3};
use crate::transport::TransportTable;

/// Inviscid flux of the conserved densities along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerFlux {
    pub mass: f64,
    pub momentum: Vec3,
    pub energy: f64,
}

/// Mass `ρu_j`, momentum `ρu_iu_j + δ_ij ρk_BΘ/m` and energy
/// `ρu_j(5k_BΘ/(2m) + u·u/2)` fluxes along axis `j`.
pub fn euler_flux(s: &MacroState, axis: usize, k: &KineticConstants) -> EulerFlux {
    let uj = s.u[axis];
    let p = s.rho * k.k_b * s.theta / k.m;
    let mut momentum = [s.rho * s.u[0] * uj, s.rho * s.u[1] * uj, s.rho * s.u[2] * uj];
    momentum[axis] += p;
    EulerFlux {
        mass: s.rho * uj,
        momentum,
        energy: s.rho * uj * (2.5 * k.k_b * s.theta / k.m + 0.5 * dot(&s.u, &s.u)),
    }
}

/// Deviatoric stress `λ Θ^{1/2} (∂_j u_i + ∂_i u_j − ⅔ δ_ij ∂_ℓ u_ℓ)`, with
/// `grad_u[i][j] = ∂_j u_i`.  The last diagonal entry is set to minus the sum
/// of the other two, so the trace vanishes exactly in floating point.
pub fn viscous_stress(grad_u: &[Vec3; 3], theta: f64, lambda_shear: f64) -> [Vec3; 3] {
    let s = lambda_shear * theta.sqrt();
    let div = grad_u[0][0] + grad_u[1][1] + grad_u[2][2];
    let mut tau = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                tau[i][j] = s * (grad_u[i][j] + grad_u[j][i]);
            }
        }
    }
    tau[0][0] = s * (2.0 * grad_u[0][0] - 2.0 / 3.0 * div);
    tau[1][1] = s * (2.0 * grad_u[1][1] - 2.0 / 3.0 * div);
    tau[2][2] = -(tau[0][0] + tau[1][1]);
    tau
}

/// Non-convective energy flux `q_j = −λ₄Θ^{1/2}∂_jΘ − λ₅Θ^{3/2}∂_j log ρ − u_iτ_ij`.
pub fn heat_flux(g: &LocalGradients, table: &TransportTable) -> Vec3 {
    let tau = viscous_stress(&g.grad_u, g.theta, table.lambda_shear);
    let sq = g.theta.sqrt();
    let mut q = [0.0; 3];
    for j in 0..3 {
        let work = g.u[0] * tau[0][j] + g.u[1] * tau[1][j] + g.u[2] * tau[2][j];
        q[j] = -table.lambda_fourier * sq * g.grad_theta[j]
            - table.lambda_dufour * g.theta * sq * g.grad_rho[j] / g.rho
            - work;
    }
    q
}

/// Material derivatives `D = ∂_t + u·∇` of `(ρ, u, Θ)` under the Euler equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialRates {
    pub d_rho: f64,
    pub d_u: Vec3,
    pub d_theta: f64,
}

/// `Dρ = −ρ∂_ju_j`, `Du_i = −(k_B/ρ)∂_i(ρΘ/m)`, `DΘ = −⅔Θ∂_ju_j`.
pub fn short_euler_rhs(g: &LocalGradients, k: &KineticConstants) -> MaterialRates {
    let div = g.divergence();
    let mut d_u = [0.0; 3];
    for (i, du) in d_u.iter_mut().enumerate() {
        *du = -k.k_b / (k.m * g.rho) * (g.theta * g.grad_rho[i] + g.rho * g.grad_theta[i]);
    }
    MaterialRates { d_rho: -g.rho * div, d_u, d_theta: -2.0 / 3.0 * g.theta * div }
}

/// Every contribution to the flux through one face, along the face normal.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FaceFlux {
    pub mass: f64,
    /// Total momentum flux, Euler part minus the stress column.
    pub momentum: Vec3,
    /// Total energy flux, the sum of the four parts below.
    pub energy: f64,
    pub euler_energy: f64,
    pub fourier: f64,
    pub dufour: f64,
    pub viscous_work: f64,
    /// Full deviatoric stress tensor at the face.
    pub stress: [Vec3; 3],
}

/// Face fluxes of a state.  `faces[a][c]` is the flux through the face of
/// cell `c` in the `+a` direction; `walls[a][c]` the flux through a
/// reflective wall on the `−a` side of `c`, where one exists.
#[derive(Debug, Clone)]
pub struct FluxSet {
    pub faces: Vec<Vec<FaceFlux>>,
    pub walls: Vec<Vec<Option<FaceFlux>>>,
}

impl FluxSet {
    /// Flux through the `−a` face of `c`.
    pub fn lower(&self, state: &FieldState, axis: usize, c: usize) -> &FaceFlux {
        match state.grid.neighbor(c, axis, -1) {
            Neighbor::Cell(j) => &self.faces[axis][j],
            Neighbor::Wall => self.walls[axis][c].as_ref().expect("wall flux exists at a reflective boundary"),
        }
    }

    /// `−Σ_a (F_{c+½} − F_{c−½})/Δx_a` of the selected scalar flux component.
    pub fn divergence_of(&self, state: &FieldState, c: usize, pick: impl Fn(&FaceFlux) -> f64) -> f64 {
        let mut s = 0.0;
        for a in 0..state.grid.dim {
            s -= (pick(&self.faces[a][c]) - pick(self.lower(state, a, c))) / state.grid.spacing[a];
        }
        s
    }

    /// Largest `|trace τ|` over all faces.
    pub fn max_stress_trace(&self) -> f64 {
        self.faces
            .iter()
            .flatten()
            .chain(self.walls.iter().flatten().flatten())
            .map(|f| (f.stress[0][0] + f.stress[1][1] + f.stress[2][2]).abs())
            .fold(0.0, f64::max)
    }
}

/// Tangential velocity gradients of the mirror image of a cell across a wall
/// normal to `axis`.
fn mirrored(grad_u: &[Vec3; 3], axis: usize) -> [Vec3; 3] {
    let mut g = *grad_u;
    for b in 0..3 {
        g[axis][b] = -g[axis][b];
    }
    g
}

pub(crate) struct FaceContext<'a> {
    pub k: &'a KineticConstants,
    pub table: &'a TransportTable,
}

impl FaceContext<'_> {
    fn face(&self, l: &MacroState, r: &MacroState, gl: &[Vec3; 3], gr: &[Vec3; 3], axis: usize, dx: f64) -> FaceFlux {
        let el = euler_flux(l, axis, self.k);
        let er = euler_flux(r, axis, self.k);
        let theta = 0.5 * (l.theta + r.theta);
        let u = [0.5 * (l.u[0] + r.u[0]), 0.5 * (l.u[1] + r.u[1]), 0.5 * (l.u[2] + r.u[2])];
        let mut grad = [[0.0; 3]; 3];
        for i in 0..3 {
            for b in 0..3 {
                grad[i][b] = if b == axis { (r.u[i] - l.u[i]) / dx } else { 0.5 * (gl[i][b] + gr[i][b]) };
            }
        }
        let tau = viscous_stress(&grad, theta, self.table.lambda_shear);
        let sq = theta.sqrt();
        let fourier = -self.table.lambda_fourier * sq * (r.theta - l.theta) / dx;
        let dufour = -self.table.lambda_dufour * theta * sq * (r.rho.ln() - l.rho.ln()) / dx;
        let viscous_work = -(u[0] * tau[0][axis] + u[1] * tau[1][axis] + u[2] * tau[2][axis]);
        let euler_energy = 0.5 * (el.energy + er.energy);
        let mut momentum = [0.0; 3];
        for i in 0..3 {
            momentum[i] = 0.5 * (el.momentum[i] + er.momentum[i]) - tau[i][axis];
        }
        FaceFlux {
            mass: 0.5 * (el.mass + er.mass),
            momentum,
            energy: euler_energy + fourier + dufour + viscous_work,
            euler_energy,
            fourier,
            dufour,
            viscous_work,
            stress: tau,
        }
    }

    pub fn fluxes(&self, state: &FieldState) -> FluxSet {
        let g = &state.grid;
        let n = g.len();
        let grads: Vec<[Vec3; 3]> = (0..n).into_par_iter().map(|c| state.local_gradients(c).grad_u).collect();
        let mut faces = Vec::with_capacity(g.dim);
        let mut walls = Vec::with_capacity(g.dim);
        for a in 0..g.dim {
            let dx = g.spacing[a];
            let row: Vec<FaceFlux> = (0..n)
                .into_par_iter()
                .map(|c| {
                    let l = state.cell(c);
                    let (r, gr) = match g.neighbor(c, a, 1) {
                        Neighbor::Cell(j) => (state.cell(j), grads[j]),
                        Neighbor::Wall => (state.across(c, a, 1), mirrored(&grads[c], a)),
                    };
                    self.face(&l, &r, &grads[c], &gr, a, dx)
                })
                .collect();
            let wall_row: Vec<Option<FaceFlux>> = (0..n)
                .into_par_iter()
                .map(|c| match g.neighbor(c, a, -1) {
                    Neighbor::Cell(_) => None,
                    Neighbor::Wall => {
                        let ghost = state.across(c, a, -1);
                        Some(self.face(&ghost, &state.cell(c), &mirrored(&grads[c], a), &grads[c], a, dx))
                    }
                })
                .collect();
            faces.push(row);
            walls.push(wall_row);
        }
        FluxSet { faces, walls }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stress_is_traceless_and_symmetric() {
        let g = [[0.3, -1.2, 0.7], [2.2, 0.9, -0.4], [0.1, 0.5, -3.3]];
        let t = viscous_stress(&g, 2.3, 0.7);
        assert_eq!(t[0][0] + t[1][1] + t[2][2], 0.0);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t[i][j], t[j][i]);
            }
        }
    }

    #[test]
    fn pure_shear_value() {
        let mut g = [[0.0; 3]; 3];
        g[0][1] = 0.8; // u_x = 0.8 y
        let t = viscous_stress(&g, 4.0, 0.5);
        assert!((t[0][1] - 0.5 * 2.0 * 0.8).abs() < 1e-15);
    }

    #[test]
    fn short_eulers_vanish_without_flow_gradients() {
        let k = KineticConstants::nondimensional();
        let mut g = LocalGradients::uniform(MacroState::new(1.0, [0.0; 3], 2.0));
        g.grad_theta = [0.3, 0.0, 0.0];
        let r = short_euler_rhs(&g, &k);
        assert_eq!(r.d_theta, 0.0);
        assert_eq!(r.d_rho, 0.0);
        assert!((r.d_u[0] + 0.3).abs() < 1e-15);
    }
}
