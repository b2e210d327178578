use std::io::{self, Write};

use super::state::FieldState;

/// Column header for a snapshot on a `dim`-dimensional grid.  All three
/// velocity components are always written.
pub fn csv_header(dim: usize) -> String {
    let coords = ["x", "y", "z"];
    let mut cols = vec!["t".to_string()];
    cols.extend(coords[..dim].iter().map(|s| s.to_string()));
    cols.extend(["rho", "ux", "uy", "uz", "theta"].iter().map(|s| s.to_string()));
    cols.join(",")
}

/// Floats with 17 significant digits, so a value survives a text roundtrip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a snapshot as CSV, preceded by `#`-prefixed provenance lines.
pub fn write_snapshot_csv<W: Write>(w: &mut W, state: &FieldState, provenance: &[String]) -> io::Result<()> {
    for line in provenance {
        writeln!(w, "# {line}")?;
    }
    let g = &state.grid;
    writeln!(w, "{}", csv_header(g.dim))?;
    for idx in 0..g.len() {
        let x = g.center(idx);
        let mut row = vec![fmt_f64(state.t)];
        row.extend(x[..g.dim].iter().map(|v| fmt_f64(*v)));
        row.push(fmt_f64(state.rho[idx]));
        row.extend(state.u[idx].iter().map(|v| fmt_f64(*v)));
        row.push(fmt_f64(state.theta[idx]));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
