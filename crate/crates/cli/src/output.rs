//! Artifact writers. Files are written only after the experiment finished.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::run::{Outcome, Table};

pub const PROFILE_HEADER: [&str; 4] = ["r", "value", "log_r", "log_value"];
pub const SWEEP_HEADER: [&str; 9] = [
    "n",
    "p",
    "m",
    "alpha",
    "k",
    "theory_exponent",
    "fitted_exponent",
    "gap",
    "pass",
];

/// Writes every artifact of `outcome` into `dir` and returns the paths written.
pub fn write_artifacts(outcome: &Outcome, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();

    let path = dir.join("result.json");
    let mut json = serde_json::to_string_pretty(&outcome.report)?;
    json.push('\n');
    fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
    written.push(path);

    if let Some(rows) = &outcome.profile {
        let path = dir.join("profile.csv");
        let mut w = writer(&path, &PROFILE_HEADER)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        written.push(path);
    }
    if let Some(table) = &outcome.solution {
        let path = dir.join("solution.csv");
        write_table(&path, table)?;
        written.push(path);
    }
    if let Some(rows) = &outcome.sweep {
        let path = dir.join("sweep.csv");
        let mut w = writer(&path, &SWEEP_HEADER)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

fn writer(path: &Path, header: &[&str]) -> anyhow::Result<csv::Writer<fs::File>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    Ok(w)
}

fn write_table(path: &Path, table: &Table) -> anyhow::Result<()> {
    let mut w = writer(path, &table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
