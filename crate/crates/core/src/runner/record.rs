use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::noise::{FixtureSource, NoiseSummary, PresetFixture};
use crate::{Error, Result, TOOLKIT_VERSION};

pub const RECORD_SCHEMA: &str = "spinq-record/1";
pub const RECORD_FILE: &str = "record.json";

/// Persisted outcome of one run.
///
/// `payload` holds every computed result; it depends only on the config,
/// the seed and the toolkit version, and `payload_sha256` is its hash in
/// canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub schema: String,
    pub toolkit_version: String,
    pub experiment: String,
    pub seed: u64,
    pub config: RunConfig,
    pub config_sha256: String,
    pub started_at: String,
    pub finished_at: String,
    pub fixtures: Vec<FixtureSource>,
    pub preset: Option<PresetFixture>,
    pub noise: Option<NoiseSummary>,
    /// False when any fit failed; `failures` says which.
    pub converged: bool,
    pub failures: Vec<String>,
    pub payload: Value,
    pub payload_sha256: String,
}

/// Serializes `value` with sorted object keys and shortest round-trip floats.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(&serde_json::to_value(value)?)?)
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl RunRecord {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Record(format!("{}: {e}", path.display())))?;
        let record: RunRecord =
            serde_json::from_str(&text).map_err(|e| Error::Record(format!("{}: {e}", path.display())))?;
        record.validate().map_err(|e| Error::Record(format!("{}: {e}", path.display())))?;
        Ok(record)
    }

    /// Checks the schema tag, both hashes and the experiment label.
    pub fn validate(&self) -> Result<()> {
        if self.schema != RECORD_SCHEMA {
            return Err(Error::Record(format!("unsupported schema `{}`", self.schema)));
        }
        if self.experiment != self.config.experiment.label() {
            return Err(Error::Record("experiment does not match the embedded config".into()));
        }
        if sha256_hex(&canonical_json(&self.payload)?) != self.payload_sha256 {
            return Err(Error::Record("payload hash mismatch".into()));
        }
        if sha256_hex(&canonical_json(&self.config)?) != self.config_sha256 {
            return Err(Error::Record("config hash mismatch".into()));
        }
        if self.converged != self.failures.is_empty() {
            return Err(Error::Record("convergence flag disagrees with the failure list".into()));
        }
        Ok(())
    }

    pub fn toolkit_matches(&self) -> bool {
        self.toolkit_version == TOOLKIT_VERSION
    }

    /// Typed view of the payload.
    pub fn payload_as<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        serde_json::from_value(self.payload.clone()).map_err(|e| Error::Record(format!("payload: {e}")))
    }
}
