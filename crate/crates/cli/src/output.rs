use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rismimo::harness::{BerCurve, SchemeConfig};
use serde::Serialize;

pub const CSV_HEADER: [&str; 8] = [
    "snr_db",
    "trials",
    "bits",
    "bit_errors",
    "ber",
    "ci95",
    "index_bit_errors",
    "cm_count",
];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: row for {snr_db} dB fails validation: {source}")]
    Row {
        path: PathBuf,
        snr_db: f64,
        source: rismimo::Error,
    },
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

/// Writes one curve, re-validating every row first. Existing files are
/// replaced, never appended to.
pub fn write_curve_csv(path: &Path, curve: &BerCurve) -> Result<(), OutputError> {
    let csv_err = |source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for p in &curve.points {
        p.validate().map_err(|source| OutputError::Row {
            path: path.to_path_buf(),
            snr_db: p.snr_db,
            source,
        })?;
        w.write_record([
            p.snr_db.to_string(),
            p.trials.to_string(),
            p.bits.to_string(),
            p.bit_errors.to_string(),
            p.ber.to_string(),
            p.ci95.to_string(),
            p.index_bit_errors.to_string(),
            p.cm_count.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Serialize)]
pub struct EntryRecord {
    pub name: String,
    pub csv: String,
    pub config: SchemeConfig,
    pub wall_time_s: f64,
    pub fallbacks: u64,
    pub digest: String,
}

/// Machine-readable record of one run. Non-finite numbers (for example an
/// infinite SNR point) are written as `null`.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub version: String,
    pub seed: u64,
    pub workers: usize,
    pub overrides: Vec<String>,
    pub source: String,
    pub description: Option<String>,
    pub started_unix_s: u64,
    pub wall_time_s: f64,
    pub total_fallbacks: u64,
    pub entries: Vec<EntryRecord>,
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<(), OutputError> {
    let text = serde_json::to_string_pretty(manifest)?;
    fs::write(path, text + "\n").map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn ensure_dir(dir: &Path) -> Result<(), OutputError> {
    fs::create_dir_all(dir).map_err(|source| OutputError::Io {
        path: dir.to_path_buf(),
        source,
    })
}
