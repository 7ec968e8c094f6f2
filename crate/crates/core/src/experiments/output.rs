//! Result files: one CSV per table plus a JSON manifest, all named after
//! the config hash.
//!
//! | file | columns |
//! |------|---------|
//! | `<kind>-<hash>-beliefs.csv` | problem, step, model_mask, probability |
//! | `<kind>-<hash>-plans.csv` | problem, objective, cost, active_explicability, static_explicability, payoff, actions |
//! | `<kind>-<hash>-noise.csv` | level, seed, final_true_belief, final_argmax, substitutions, noop_corruptions |
//! | `<kind>-<hash>-noise_curves.csv` | level, problem, step, mean_true_belief |
//! | `<kind>-<hash>-noise_summary.csv` | level, seeds, mean_final_true_belief, argmax_true_fraction |
//! | `<kind>-<hash>.json` | manifest |
//!
//! Tables a kind does not produce are not written.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::SCHEMA_VERSION;

use super::config::{ExperimentConfig, ExperimentKind};
use super::runner::ExperimentResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub models: usize,
    pub true_mask: usize,
    pub problems: Vec<usize>,
    pub truncated: bool,
    pub zero_evidence_steps: usize,
    pub noop_corruptions: usize,
    pub files: Vec<String>,
    pub summary: String,
}

pub fn manifest_path(dir: &Path, kind: ExperimentKind, hash: &str) -> PathBuf {
    dir.join(format!("{kind}-{hash}.json"))
}

/// A manifest left by an earlier run with the same config, if all its files
/// are still present.
pub fn existing_manifest(dir: &Path, kind: ExperimentKind, hash: &str) -> Option<Manifest> {
    let text = std::fs::read_to_string(manifest_path(dir, kind, hash)).ok()?;
    let manifest: Manifest = serde_json::from_str(&text).ok()?;
    manifest
        .files
        .iter()
        .all(|f| dir.join(f).is_file())
        .then_some(manifest)
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    writer.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Serializes every table of `result` to bytes, keyed by file name.
pub fn render(result: &ExperimentResult) -> Result<Vec<(String, Vec<u8>)>> {
    let stem = format!("{}-{}", result.kind, result.config_hash);
    let mut files = Vec::new();
    let mut table = |name: &str, bytes: Vec<u8>, rows: usize| {
        if rows > 0 {
            files.push((format!("{stem}-{name}.csv"), bytes));
        }
    };
    table("beliefs", csv_bytes(&result.beliefs)?, result.beliefs.len());
    table("plans", csv_bytes(&result.plans)?, result.plans.len());
    table("noise", csv_bytes(&result.noise)?, result.noise.len());
    table(
        "noise_curves",
        csv_bytes(&result.noise_curves)?,
        result.noise_curves.len(),
    );
    table(
        "noise_summary",
        csv_bytes(&result.noise_summary)?,
        result.noise_summary.len(),
    );
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        kind: result.kind,
        config_hash: result.config_hash.clone(),
        config: result.config.clone(),
        models: result.models,
        true_mask: result.true_mask,
        problems: result.problems.clone(),
        truncated: result.truncated,
        zero_evidence_steps: result.zero_evidence_steps,
        noop_corruptions: result.noise.iter().map(|r| r.noop_corruptions).sum(),
        files: files.iter().map(|(name, _)| name.clone()).collect(),
        summary: result.summary_table(),
    };
    let mut json = serde_json::to_vec_pretty(&manifest)?;
    json.push(b'\n');
    files.push((format!("{stem}.json"), json));
    Ok(files)
}

/// Writes all result files into `dir`, manifest last. On failure the files
/// written so far are removed.
pub fn write_result(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let files = render(result)?;
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Err(e) = std::fs::write(&path, bytes) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            let _ = std::fs::remove_file(&path);
            return Err(e.into());
        }
        written.push(path);
    }
    Ok(written)
}
