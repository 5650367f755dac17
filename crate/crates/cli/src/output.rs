//! Report envelope and atomic artifact emission.
//!
//! Artifacts are written to temporaries and renamed only after every format
//! has been produced, so an error exit leaves no partial files. A lock file
//! serializes writers per output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use ockham_core::proxies::Population;
use ockham_core::report::{canonical_json_bytes, CsvTable};
use ockham_core::tasks::DistributionLabel;
use ockham_core::SubsetMode;

use crate::config::ResolvedConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

pub fn tool_info() -> ToolInfo {
    ToolInfo {
        name: "ockham",
        version: env!("CARGO_PKG_VERSION"),
    }
}

/// Labels each report carries alongside its results.
#[derive(Debug, Clone, Serialize)]
pub struct Labels {
    pub subset_mode: SubsetMode,
    pub population: Population,
    pub distribution: Option<DistributionLabel>,
}

/// The common report envelope; `results` is command-specific and
/// counterexamples, where a command produces them, are serialized complete
/// enough to replay.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub command: String,
    pub config: ResolvedConfig,
    pub labels: Labels,
    pub results: T,
    pub counterexamples: Vec<serde_json::Value>,
}

/// Holds the per-directory lock for the duration of a run.
pub struct OutDirLock {
    path: PathBuf,
}

impl OutDirLock {
    pub fn acquire(dir: &Path) -> Result<Self, String> {
        fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
        let path = dir.join(".ockham.lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(Self { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(format!(
                "output directory {} is locked by another run (remove {} if stale)",
                dir.display(),
                path.display()
            )),
            Err(e) => Err(format!("cannot lock {}: {e}", path.display())),
        }
    }
}

impl Drop for OutDirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// Writes the requested formats atomically; nothing is renamed into place
/// until every format has been staged.
pub fn write_artifacts<T: Serialize>(
    dir: &Path,
    command: &str,
    report: &Report<T>,
    csv: Option<&CsvTable>,
    formats: &[String],
) -> Result<Vec<PathBuf>, String> {
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let mut stage = |name: String, bytes: Vec<u8>| -> Result<(), String> {
        let tmp = dir.join(format!(".tmp-{name}"));
        let final_path = dir.join(name);
        fs::write(&tmp, bytes).map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
        staged.push((tmp, final_path));
        Ok(())
    };

    let mut result = (|| -> Result<(), String> {
        for format in formats {
            match format.as_str() {
                "json" => {
                    let bytes = canonical_json_bytes(report)
                        .map_err(|e| format!("cannot serialize report: {e}"))?;
                    stage(format!("{command}.json"), bytes)?;
                }
                "csv" => {
                    if let Some(table) = csv {
                        stage(format!("{command}.csv"), table.to_csv_string().into_bytes())?;
                    }
                }
                other => return Err(format!("unknown format \"{other}\"")),
            }
        }
        Ok(())
    })();

    let mut written = Vec::new();
    if result.is_ok() {
        for (tmp, final_path) in &staged {
            if let Err(e) = fs::rename(tmp, final_path) {
                result = Err(format!("cannot finalize {}: {e}", final_path.display()));
                break;
            }
            written.push(final_path.clone());
        }
    }
    if let Err(e) = result {
        for (tmp, _) in &staged {
            let _ = fs::remove_file(tmp);
        }
        return Err(e);
    }
    Ok(written)
}
