use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    /// Mirror ghost cell: normal velocity flipped, zero normal gradient of ρ and Θ.
    Reflective,
}

/// A cell-centred rectangular grid in one to three dimensions.  Inactive axes
/// carry a single cell; the velocity field keeps all three components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dim: usize,
    pub cells: [usize; 3],
    pub spacing: [f64; 3],
    pub boundary: [Boundary; 3],
}

/// The cell across a face, or a wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    Cell(usize),
    Wall,
}

impl Grid {
    pub fn new(cells: &[usize], spacing: &[f64], boundary: &[Boundary]) -> Result<Self> {
        let dim = cells.len();
        if !(1..=3).contains(&dim) || spacing.len() != dim || boundary.len() != dim {
            return Err(Error::Domain(format!(
                "grid needs 1 to 3 axes with matching spacing and boundary lists, got {} / {} / {}",
                cells.len(),
                spacing.len(),
                boundary.len()
            )));
        }
        let mut g = Grid { dim, cells: [1; 3], spacing: [1.0; 3], boundary: [Boundary::Periodic; 3] };
        for a in 0..dim {
            if cells[a] < 4 {
                return Err(Error::Domain(format!("axis {a} has {} cells; at least 4 are needed", cells[a])));
            }
            if !(spacing[a] > 0.0 && spacing[a].is_finite()) {
                return Err(Error::Domain(format!("axis {a} spacing must be positive, got {}", spacing[a])));
            }
            g.cells[a] = cells[a];
            g.spacing[a] = spacing[a];
            g.boundary[a] = boundary[a];
        }
        Ok(g)
    }

    /// A periodic line of `n` cells spanning `length`.
    pub fn periodic_1d(n: usize, length: f64) -> Result<Self> {
        Self::new(&[n], &[length / n as f64], &[Boundary::Periodic])
    }

    pub fn len(&self) -> usize {
        self.cells[0] * self.cells[1] * self.cells[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_active(&self, axis: usize) -> bool {
        axis < self.dim
    }

    pub fn index(&self, c: [usize; 3]) -> usize {
        c[0] + self.cells[0] * (c[1] + self.cells[1] * c[2])
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.cells[0];
        let r = idx / self.cells[0];
        [i, r % self.cells[1], r / self.cells[1]]
    }

    pub fn center(&self, idx: usize) -> Vec3 {
        let c = self.coords(idx);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = (c[a] as f64 + 0.5) * self.spacing[a];
        }
        x
    }

    pub fn length(&self, axis: usize) -> f64 {
        self.cells[axis] as f64 * self.spacing[axis]
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing[a]).product()
    }

    /// Neighbour of `idx` one step along `axis` in direction `step` (±1).
    pub fn neighbor(&self, idx: usize, axis: usize, step: isize) -> Neighbor {
        let mut c = self.coords(idx);
        let n = self.cells[axis] as isize;
        let mut j = c[axis] as isize + step;
        if j < 0 || j >= n {
            match self.boundary[axis] {
                Boundary::Periodic => j = j.rem_euclid(n),
                Boundary::Reflective => return Neighbor::Wall,
            }
        }
        c[axis] = j as usize;
        Neighbor::Cell(self.index(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_and_wrap() {
        let g = Grid::new(&[5, 4, 6], &[1.0, 0.5, 0.25], &[Boundary::Periodic, Boundary::Reflective, Boundary::Periodic])
            .unwrap();
        for idx in 0..g.len() {
            assert_eq!(g.index(g.coords(idx)), idx);
        }
        let first = g.index([0, 0, 0]);
        assert_eq!(g.neighbor(first, 0, -1), Neighbor::Cell(g.index([4, 0, 0])));
        assert_eq!(g.neighbor(first, 1, -1), Neighbor::Wall);
        assert!((g.cell_volume() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn too_few_cells_rejected() {
        assert!(Grid::periodic_1d(3, 1.0).is_err());
        assert!(Grid::new(&[8], &[0.0], &[Boundary::Periodic]).is_err());
    }
}
