//! Output writers: CSV for curves and grids, JSON for table-style results.
//! Every file carries a provenance block (config echo, version, seed,
//! config hash); no timestamps, so identical runs produce identical bytes.

use anyhow::{Context, Result};
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// All floats are emitted with 9 significant digits.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.8e}")
    }
}

pub fn config_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    hex[..16].to_string()
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub subcommand: &'static str,
    pub comment: String,
    pub seed: u64,
    pub hash: String,
    pub canonical_config: String,
}

impl Provenance {
    pub fn new(subcommand: &'static str, comment: &str, seed: u64, canonical: &str) -> Self {
        Self {
            subcommand,
            comment: comment.to_string(),
            seed,
            hash: config_hash(canonical),
            canonical_config: canonical.to_string(),
        }
    }
}

/// Tabular sweep output: column names plus formatted rows, each tagged with
/// the generating config hash and a status.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub failed_cells: usize,
}

impl SweepTable {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            failed_cells: 0,
        }
    }

    pub fn push_ok(&mut self, mut row: Vec<String>) {
        row.push("ok".to_string());
        self.rows.push(row);
    }

    pub fn push_failed(&mut self, mut row: Vec<String>, reason: &str) {
        row.push(format!("failed:{}", reason.replace([',', '\n'], ";")));
        self.rows.push(row);
        self.failed_cells += 1;
    }

    pub fn to_csv(&self, provenance: &Provenance) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# cslfa {}", provenance.subcommand);
        let _ = writeln!(out, "# version = {VERSION}");
        let _ = writeln!(out, "# config_hash = {}", provenance.hash);
        let _ = writeln!(out, "# seed = {}", provenance.seed);
        if !provenance.comment.is_empty() {
            let _ = writeln!(out, "# comment = {}", provenance.comment);
        }
        for line in provenance.canonical_config.lines() {
            let _ = writeln!(out, "# config: {line}");
        }
        let mut header = self.columns.clone();
        header.push("status");
        header.push("config_hash");
        let _ = writeln!(out, "{}", header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{},{}", row.join(","), provenance.hash);
        }
        out
    }
}

/// JSON writer for single-table results.
pub fn to_json(provenance: &Provenance, body: serde_json::Value) -> String {
    let doc = json!({
        "provenance": {
            "subcommand": provenance.subcommand,
            "version": VERSION,
            "config_hash": provenance.hash,
            "seed": provenance.seed,
            "comment": provenance.comment,
            "config": provenance.canonical_config,
        },
        "result": body,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json serialization");
    text.push('\n');
    text
}

/// Resolve the output path: explicit flag wins over the config key; a
/// relative path is joined onto `CSLFA_OUTPUT_DIR` when that is set.
pub fn resolve_output_path(
    flag: Option<&Path>,
    config_output: Option<&str>,
    default_name: &str,
) -> PathBuf {
    let base: PathBuf = flag
        .map(Path::to_path_buf)
        .or_else(|| config_output.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default_name));
    if base.is_relative() {
        if let Ok(dir) = std::env::var("CSLFA_OUTPUT_DIR") {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(base);
            }
        }
    }
    base
}

pub fn write_output(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}
