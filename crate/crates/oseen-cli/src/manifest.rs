//! Run manifests.
//!
//! Every command writes exactly one JSON manifest at the end of a
//! successful run, atomically (write to `<name>.tmp`, then rename), and
//! only after every artifact it lists exists on disk. Schema:
//!
//! ```text
//! {
//!   "command":         string   — subcommand name,
//!   "argv":            [string] — the invocation, verbatim,
//!   "config":          object   — RunConfig snapshot (see config.rs),
//!   "parameters":      object   — subcommand parameters (alpha, k, …),
//!   "started_unix":    integer  — seconds since the epoch,
//!   "finished_unix":   integer,
//!   "artifacts":       [string] — file names relative to the manifest,
//!   "total_points":    integer  — computed cells,
//!   "unstable_points": integer  — cells whose truncation-stability flag
//!                                 is false,
//!   "cells":           array    — per-cell results keyed by their input
//!                                 parameters; `--resume` reuses entries
//!                                 whose inputs match bit-for-bit
//! }
//! ```
//!
//! Timestamps live only here, never in CSV bodies, so re-running a
//! command with the same configuration and seed reproduces each CSV
//! byte for byte.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub parameters: serde_json::Value,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub artifacts: Vec<String>,
    pub total_points: usize,
    pub unstable_points: usize,
    pub cells: serde_json::Value,
}

pub fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    /// Write atomically next to the artifacts it describes, after
    /// checking that each listed artifact exists.
    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        for artifact in &self.artifacts {
            let p = dir.join(artifact);
            if !p.is_file() {
                return Err(CliError::Internal(format!(
                    "manifest lists missing artifact {}",
                    p.display()
                )));
            }
        }
        let path = dir.join(name);
        let tmp = dir.join(format!("{name}.tmp"));
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Internal(format!("manifest serialization: {e}")))?;
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Load a previous run's manifest, if present and well-formed.
    /// Returns `None` (rather than an error) when absent, so `--resume`
    /// on a fresh directory silently computes everything.
    pub fn load(dir: &Path, name: &str) -> Option<RunManifest> {
        let text = std::fs::read_to_string(dir.join(name)).ok()?;
        serde_json::from_str(&text).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_to_index_missing_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = RunManifest {
            command: "sweep".into(),
            argv: vec!["oseen".into()],
            config: serde_json::json!({}),
            parameters: serde_json::json!({}),
            started_unix: 0,
            finished_unix: 0,
            artifacts: vec!["ghost.csv".into()],
            total_points: 0,
            unstable_points: 0,
            cells: serde_json::json!([]),
        };
        assert!(manifest.write(dir.path(), "manifest.json").is_err());
        assert!(RunManifest::load(dir.path(), "manifest.json").is_none());
    }

    #[test]
    fn round_trips_once_artifacts_exist() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("data.csv"), "a,b\n1,2\n").unwrap();
        let manifest = RunManifest {
            command: "sweep".into(),
            argv: vec!["oseen".into(), "sweep".into()],
            config: serde_json::json!({"n": 600}),
            parameters: serde_json::json!({"alpha": 1e4}),
            started_unix: 1,
            finished_unix: 2,
            artifacts: vec!["data.csv".into()],
            total_points: 1,
            unstable_points: 0,
            cells: serde_json::json!([{"alpha": 1e4, "psi": 42.0}]),
        };
        manifest.write(dir.path(), "manifest.json").unwrap();
        assert!(!dir.path().join("manifest.json.tmp").exists());
        let back = RunManifest::load(dir.path(), "manifest.json").unwrap();
        assert_eq!(back.command, "sweep");
        assert_eq!(back.cells[0]["alpha"].as_f64(), Some(1e4));
    }
}
