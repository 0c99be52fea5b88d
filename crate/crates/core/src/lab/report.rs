use super::config::{ExperimentConfig, GridSpec};
use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub measured: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), verdict: Verdict::from_bool(ok), measured: BTreeMap::new(), note: None }
    }

    pub fn inconclusive(name: impl Into<String>, cause: &Error) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Inconclusive,
            measured: BTreeMap::new(),
            note: Some(cause.to_string()),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: f64) -> Self {
        self.measured.insert(key.into(), value);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.note = Some(text.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<GridSpec>,
    pub version: String,
}

impl Provenance {
    pub fn of_config(cfg: &ExperimentConfig) -> Self {
        Provenance { config_hash: cfg.hash(), grid: Some(cfg.grid.clone()), version: version() }
    }

    /// Provenance keyed by a digest of raw inputs.
    pub fn of_inputs(digest: String) -> Self {
        Provenance { config_hash: digest, grid: None, version: version() }
    }
}

fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn new(experiment: &str, provenance: Provenance, checks: Vec<Check>) -> Self {
        let verdict = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if checks.is_empty() || checks.iter().any(|c| c.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        ExperimentReport {
            experiment: experiment.to_string(),
            verdict,
            checks,
            provenance,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
