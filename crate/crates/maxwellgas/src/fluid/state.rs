use serde::{Deserialize, Serialize};

use super::grid::{Boundary, Grid, Neighbor};
use crate::error::{Error, Result};
use crate::state::{dot, KineticConstants, LocalGradients, MacroState, Vec3};

/// Density, velocity and temperature sampled at the cells of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub grid: Grid,
    pub t: f64,
    pub rho: Vec<f64>,
    pub u: Vec<Vec3>,
    pub theta: Vec<f64>,
}

/// Conserved densities per cell: mass, momentum and total energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Conserved {
    pub mass: Vec<f64>,
    pub momentum: Vec<Vec3>,
    pub energy: Vec<f64>,
}

/// Domain integrals of the conserved densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub mass: f64,
    pub momentum: Vec3,
    pub energy: f64,
}

impl FieldState {
    pub fn new(grid: Grid, t: f64, rho: Vec<f64>, u: Vec<Vec3>, theta: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if rho.len() != n || u.len() != n || theta.len() != n {
            return Err(Error::Domain(format!(
                "field arrays have lengths {}/{}/{} on a grid of {n} cells",
                rho.len(),
                u.len(),
                theta.len()
            )));
        }
        let s = Self { grid, t, rho, u, theta };
        s.check_positive()?;
        Ok(s)
    }

    /// Sample `f` at every cell centre.
    pub fn from_fn(grid: Grid, t: f64, f: impl Fn(&Vec3) -> MacroState) -> Result<Self> {
        let n = grid.len();
        let mut rho = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        for idx in 0..n {
            let s = f(&grid.center(idx));
            rho.push(s.rho);
            u.push(s.u);
            theta.push(s.theta);
        }
        Self::new(grid, t, rho, u, theta)
    }

    pub fn check_positive(&self) -> Result<()> {
        for i in 0..self.grid.len() {
            if !(self.rho[i] > 0.0) || !(self.theta[i] > 0.0) {
                return Err(Error::Positivity { cell: i, rho: self.rho[i], theta: self.theta[i] });
            }
        }
        Ok(())
    }

    pub fn cell(&self, idx: usize) -> MacroState {
        MacroState::new(self.rho[idx], self.u[idx], self.theta[idx])
    }

    /// State one step across a face: the neighbouring cell, or the mirror
    /// image of `idx` when the face is a reflective wall.
    pub fn across(&self, idx: usize, axis: usize, step: isize) -> MacroState {
        match self.grid.neighbor(idx, axis, step) {
            Neighbor::Cell(j) => self.cell(j),
            Neighbor::Wall => {
                let mut s = self.cell(idx);
                s.u[axis] = -s.u[axis];
                s
            }
        }
    }

    pub fn conserved(&self, k: &KineticConstants) -> Conserved {
        let n = self.grid.len();
        let mut c = Conserved { mass: vec![0.0; n], momentum: vec![[0.0; 3]; n], energy: vec![0.0; n] };
        for i in 0..n {
            let r = self.rho[i];
            let u = self.u[i];
            c.mass[i] = r;
            c.momentum[i] = [r * u[0], r * u[1], r * u[2]];
            c.energy[i] = r * (1.5 * k.k_b * self.theta[i] / k.m + 0.5 * dot(&u, &u));
        }
        c
    }

    /// Recover primitive fields; fails on the first cell with non-positive ρ or Θ.
    pub fn from_conserved(grid: Grid, t: f64, c: &Conserved, k: &KineticConstants) -> Result<Self> {
        let n = grid.len();
        let mut rho = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        for i in 0..n {
            let r = c.mass[i];
            if !(r > 0.0) {
                return Err(Error::Positivity { cell: i, rho: r, theta: f64::NAN });
            }
            let v = [c.momentum[i][0] / r, c.momentum[i][1] / r, c.momentum[i][2] / r];
            let th = (c.energy[i] / r - 0.5 * dot(&v, &v)) * 2.0 * k.m / (3.0 * k.k_b);
            if !(th > 0.0) {
                return Err(Error::Positivity { cell: i, rho: r, theta: th });
            }
            rho.push(r);
            u.push(v);
            theta.push(th);
        }
        Ok(Self { grid, t, rho, u, theta })
    }

    pub fn totals(&self, k: &KineticConstants) -> Totals {
        let c = self.conserved(k);
        let dv = self.grid.cell_volume();
        let mut t = Totals { mass: 0.0, momentum: [0.0; 3], energy: 0.0 };
        for i in 0..self.grid.len() {
            t.mass += c.mass[i] * dv;
            for d in 0..3 {
                t.momentum[d] += c.momentum[i][d] * dv;
            }
            t.energy += c.energy[i] * dv;
        }
        t
    }

    /// Second-order central-difference gradients at a cell centre.
    pub fn local_gradients(&self, idx: usize) -> LocalGradients {
        let mut g = LocalGradients::uniform(self.cell(idx));
        for a in 0..self.grid.dim {
            let h2 = 2.0 * self.grid.spacing[a];
            let p = self.across(idx, a, 1);
            let m = self.across(idx, a, -1);
            g.grad_rho[a] = (p.rho - m.rho) / h2;
            g.grad_theta[a] = (p.theta - m.theta) / h2;
            for i in 0..3 {
                g.grad_u[i][a] = (p.u[i] - m.u[i]) / h2;
            }
        }
        g
    }

    /// Multilinear interpolation between cell centres; periodic axes wrap,
    /// reflective axes clamp to the outermost centres.
    pub fn interpolate(&self, x: &Vec3) -> MacroState {
        let g = &self.grid;
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        let mut upper = [0usize; 3];
        for a in 0..3 {
            if !g.is_active(a) {
                continue;
            }
            let n = g.cells[a];
            let xi = x[a] / g.spacing[a] - 0.5;
            match g.boundary[a] {
                Boundary::Periodic => {
                    let f = xi.floor();
                    base[a] = (f as i64).rem_euclid(n as i64) as usize;
                    upper[a] = (base[a] + 1) % n;
                    frac[a] = xi - f;
                }
                Boundary::Reflective => {
                    let c = xi.clamp(0.0, (n - 1) as f64);
                    let f = c.floor().min((n - 2) as f64);
                    base[a] = f as usize;
                    upper[a] = base[a] + 1;
                    frac[a] = c - f;
                }
            }
        }
        let mut out = MacroState::new(0.0, [0.0; 3], 0.0);
        for corner in 0..8usize {
            let mut w = 1.0;
            let mut c = [0usize; 3];
            let mut skip = false;
            for a in 0..3 {
                let hi = corner >> a & 1 == 1;
                if !g.is_active(a) {
                    if hi {
                        skip = true;
                    }
                    continue;
                }
                c[a] = if hi { upper[a] } else { base[a] };
                w *= if hi { frac[a] } else { 1.0 - frac[a] };
            }
            if skip || w == 0.0 {
                continue;
            }
            let s = self.cell(g.index(c));
            out.rho += w * s.rho;
            out.theta += w * s.theta;
            for d in 0..3 {
                out.u[d] += w * s.u[d];
            }
        }
        out
    }
}
