//! Plot-ready column files built from the artifacts of a finished run.
//!
//! Each snapshot and field becomes one whitespace-separated file with the
//! coordinates followed by the value, so 1-D runs give two columns and 2-D
//! runs three.  `manifest.json` lists every file with its time.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use maxwellgas::fluid::io::fmt_f64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::failure::CliError;
use crate::provenance::Provenance;
use crate::scenario::{write_json, PLOT_DIR, SUMMARY_FILE};

pub const MANIFEST_FILE: &str = "manifest.json";

const COORDS: [&str; 3] = ["x", "y", "z"];

/// One emitted column file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotEntry {
    /// Path relative to the plot directory.
    pub file: String,
    pub field: String,
    pub snapshot: usize,
    pub t: f64,
}

/// A parsed CSV artifact: header names and numeric rows.
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::MissingArtifact(format!("{}: {e}", path.display())))?;
        let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| CliError::MissingArtifact(format!("{} has no header", path.display())))?;
        let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let row: Result<Vec<f64>, _> = line.split(',').map(|v| v.parse::<f64>()).collect();
            let row = row.map_err(|e| CliError::MissingArtifact(format!("{} data row {}: {e}", path.display(), n + 1)))?;
            if row.len() != columns.len() {
                return Err(CliError::MissingArtifact(format!(
                    "{} data row {} has {} values for {} columns",
                    path.display(),
                    n + 1,
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn write_columns(
    path: &Path,
    prov: &[String],
    note: &str,
    coords: &[(String, usize)],
    value: (&str, usize),
    rows: &[&Vec<f64>],
) -> Result<(), CliError> {
    let mut w = BufWriter::new(fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?);
    for line in prov {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "# {note}")?;
    let names: Vec<&str> = coords.iter().map(|c| c.0.as_str()).chain([value.0]).collect();
    writeln!(w, "# {}", names.join(" "))?;
    for row in rows {
        let cols: Vec<String> = coords.iter().map(|c| row[c.1]).chain([row[value.1]]).map(fmt_f64).collect();
        writeln!(w, "{}", cols.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

/// Turn the run in `run_dir` into column files under `run_dir/plot`.
pub fn emit_plot_data(run_dir: &Path) -> Result<Vec<PlotEntry>, CliError> {
    let summary_path = run_dir.join(SUMMARY_FILE);
    let text = fs::read_to_string(&summary_path).map_err(|_| {
        CliError::MissingArtifact(format!("{} not found; {} holds no completed run", summary_path.display(), run_dir.display()))
    })?;
    let summary: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::MissingArtifact(format!("{}: {e}", summary_path.display())))?;
    let prov: Provenance = serde_json::from_value(summary["provenance"].clone())
        .map_err(|e| CliError::MissingArtifact(format!("{}: provenance: {e}", summary_path.display())))?;
    let prov_lines = prov.lines();
    let plot_dir = run_dir.join(PLOT_DIR);
    fs::create_dir_all(&plot_dir)?;

    let mut entries = Vec::new();
    let mut emit = |table: &Table, rows: &[&Vec<f64>], snapshot: usize, t: f64, fields: &[&str]| -> Result<(), CliError> {
        let coords: Vec<(String, usize)> =
            COORDS.iter().filter_map(|c| table.index(c).map(|i| (c.to_string(), i))).collect();
        for field in fields {
            let col = table.index(field).ok_or_else(|| CliError::MissingArtifact(format!("no `{field}` column")))?;
            let file = format!("{field}_{snapshot:05}.dat");
            let note = format!("snapshot {snapshot} t {} field {field}", fmt_f64(t));
            write_columns(&plot_dir.join(&file), &prov_lines, &note, &coords, (field, col), rows)?;
            entries.push(PlotEntry { file, field: field.to_string(), snapshot, t });
        }
        Ok(())
    };

    match summary["kind"].as_str() {
        Some("fluid") => {
            let snaps = summary["snapshots"].as_array().cloned().unwrap_or_default();
            if snaps.is_empty() {
                return Err(CliError::MissingArtifact(format!("{} lists no snapshots", summary_path.display())));
            }
            for (i, s) in snaps.iter().enumerate() {
                let file = s["file"].as_str().ok_or_else(|| CliError::MissingArtifact("snapshot entry without a file".into()))?;
                let t = s["t"].as_f64().ok_or_else(|| CliError::MissingArtifact("snapshot entry without a time".into()))?;
                let table = Table::read(&run_dir.join(file))?;
                let rows: Vec<&Vec<f64>> = table.rows.iter().collect();
                emit(&table, &rows, i, t, &["rho", "ux", "uy", "uz", "theta"])?;
            }
        }
        Some("lattice") => {
            let file = summary["series"].as_str().ok_or_else(|| CliError::MissingArtifact("summary names no series".into()))?;
            let table = Table::read(&run_dir.join(file))?;
            let tcol = table.index("t").ok_or_else(|| CliError::MissingArtifact(format!("{file} has no t column")))?;
            // Rows of one sample are contiguous and share the same time.
            let mut groups: Vec<(f64, Vec<&Vec<f64>>)> = Vec::new();
            for row in &table.rows {
                match groups.last_mut() {
                    Some((t, g)) if *t == row[tcol] => g.push(row),
                    _ => groups.push((row[tcol], vec![row])),
                }
            }
            if groups.is_empty() {
                return Err(CliError::MissingArtifact(format!("{file} holds no samples")));
            }
            for (i, (t, rows)) in groups.iter().enumerate() {
                emit(&table, rows, i, *t, &["N", "u", "theta"])?;
            }
        }
        other => {
            return Err(CliError::MissingArtifact(format!(
                "{} has kind {other:?}; only fluid and lattice runs have plot data",
                summary_path.display()
            )))
        }
    }

    let manifest = serde_json::json!({ "provenance": prov, "files": entries });
    write_json(&plot_dir.join(MANIFEST_FILE), &manifest)?;
    Ok(entries)
}
