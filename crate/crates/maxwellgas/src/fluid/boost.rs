use super::grid::Boundary;
use super::state::FieldState;
use crate::error::{Error, Result};
use crate::state::Vec3;

/// Shifts closer than this to a whole number of cells are applied as exact rolls.
const ROLL_TOLERANCE: f64 = 1e-9;

/// Active Galilean boost by `v`: `ρ′(x′) = ρ(x)`, `Θ′(x′) = Θ(x)`,
/// `u′(x′) = u(x) + v` with `x′ = x + v t`.
///
/// At `t = 0` only the velocity changes.  Otherwise the fields are translated
/// by `v t` along each active axis, exactly when the shift is a whole number
/// of cells and by periodic cubic interpolation when it is not.  Translation
/// needs periodic axes.
pub fn boost(state: &FieldState, v: &Vec3) -> Result<FieldState> {
    let g = &state.grid;
    let mut out = state.clone();
    for a in 0..g.dim {
        let shift = v[a] * state.t / g.spacing[a];
        if shift == 0.0 {
            continue;
        }
        if g.boundary[a] != Boundary::Periodic {
            return Err(Error::Domain(format!("boost needs a periodic axis {a} to translate the fields")));
        }
        out = translate_axis(&out, a, shift);
    }
    for u in out.u.iter_mut() {
        for d in 0..3 {
            u[d] += v[d];
        }
    }
    Ok(out)
}

fn lagrange4(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}

/// New value at cell `i` is the old field at `i − shift` (in cells).
fn translate_axis(state: &FieldState, axis: usize, shift: f64) -> FieldState {
    let g = &state.grid;
    let n = g.cells[axis] as i64;
    let whole = shift.round();
    let exact = (shift - whole).abs() < ROLL_TOLERANCE;
    let mut out = state.clone();
    for idx in 0..g.len() {
        let c = g.coords(idx);
        let at = |j: i64| {
            let mut cc = c;
            cc[axis] = j.rem_euclid(n) as usize;
            g.index(cc)
        };
        if exact {
            let src = at(c[axis] as i64 - whole as i64);
            out.rho[idx] = state.rho[src];
            out.u[idx] = state.u[src];
            out.theta[idx] = state.theta[src];
        } else {
            let p = c[axis] as f64 - shift;
            let j = p.floor();
            let w = lagrange4(p - j);
            let j = j as i64;
            let src = [at(j - 1), at(j), at(j + 1), at(j + 2)];
            let mut rho = 0.0;
            let mut theta = 0.0;
            let mut u = [0.0; 3];
            for (s, wk) in src.iter().zip(w) {
                rho += wk * state.rho[*s];
                theta += wk * state.theta[*s];
                for d in 0..3 {
                    u[d] += wk * state.u[*s][d];
                }
            }
            out.rho[idx] = rho;
            out.theta[idx] = theta;
            out.u[idx] = u;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluid::Grid;
    use crate::state::MacroState;

    fn sample(t: f64) -> FieldState {
        let g = Grid::periodic_1d(16, 1.0).unwrap();
        let mut s = FieldState::from_fn(g, t, |x| {
            let p = 2.0 * std::f64::consts::PI * x[0];
            MacroState::new(1.0 + 0.2 * p.sin(), [0.1 * p.cos(), 0.0, 0.0], 1.0 + 0.1 * p.sin())
        })
        .unwrap();
        s.t = t;
        s
    }

    #[test]
    fn inverse_at_time_zero() {
        let s = sample(0.0);
        let b = boost(&boost(&s, &[0.7, 0.0, -0.2]).unwrap(), &[-0.7, 0.0, 0.2]).unwrap();
        assert_eq!(b.rho, s.rho);
        assert_eq!(b.theta, s.theta);
        for (x, y) in b.u.iter().zip(&s.u) {
            for d in 0..3 {
                assert!((x[d] - y[d]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn whole_cell_shift_is_a_roll() {
        let s = sample(0.5);
        // v t = 0.25 = 4 cells.
        let b = boost(&s, &[0.5, 0.0, 0.0]).unwrap();
        for i in 0..16 {
            assert_eq!(b.rho[(i + 4) % 16], s.rho[i]);
        }
    }
}
