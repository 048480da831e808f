use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::Serialize;

/// Record of one persisted run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
    pub elapsed_seconds: f64,
    pub artifacts: Vec<PathBuf>,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, arguments: Vec<String>, seed: Option<u64>, started_at: DateTime<Utc>) -> Self {
        let finished_at = Utc::now();
        RunManifest {
            command: command.to_string(),
            arguments,
            seed,
            started_at,
            finished_at,
            elapsed_seconds: (finished_at - started_at).num_milliseconds() as f64 / 1000.0,
            artifacts: Vec::new(),
            version: format!("descent-cli {}", env!("CARGO_PKG_VERSION")),
        }
    }

    /// `report.json` → `report.manifest.json`.
    pub fn path_for(report: &Path) -> PathBuf {
        let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        report.with_file_name(format!("{stem}.manifest.json"))
    }
}
