//! Report documents: config echo, result payload, and a provenance block.
//! Payloads are deterministic; wall time and thread count live only in the
//! provenance block, which byte-comparisons exclude.

use crate::config::{RunConfig, Tolerances};
use serde::Serialize;
use std::path::{Path, PathBuf};

pub const SCHEMA: &str = "acf-report/1";

#[derive(Serialize)]
pub struct Provenance {
    pub grid: (usize, usize),
    pub tolerances: Tolerances,
    pub wall_time_ms: u128,
    pub version: &'static str,
    pub threads: String,
}

#[derive(Serialize)]
pub struct ReportDocument<'a> {
    pub schema: &'static str,
    pub command: String,
    pub config: &'a RunConfig,
    pub payload: serde_json::Value,
    pub provenance: Provenance,
}

pub fn write_report(
    out_dir: &Path,
    config: &RunConfig,
    payload: serde_json::Value,
    wall_time_ms: u128,
    threads: &str,
) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let doc = ReportDocument {
        schema: SCHEMA,
        command: config.command.clone(),
        config,
        payload,
        provenance: Provenance {
            grid: config.grid,
            tolerances: config.tolerances.clone(),
            wall_time_ms,
            version: env!("CARGO_PKG_VERSION"),
            threads: threads.to_string(),
        },
    };
    let path = out_dir.join(format!("{}_report.json", config.command.replace('-', "_")));
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

pub fn write_aux_file(out_dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}
