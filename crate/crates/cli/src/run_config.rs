//! Command configuration: experiment config files plus command-line
//! overrides, validated against fixed ranges.

use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use wpcurve::io::{from_json, read_text};
use wpcurve::lab::{ExperimentConfig, Tolerances};
use wpcurve::{Error, Result};

pub const NODE_RANGE: RangeInclusive<usize> = 257..=65537;
pub const WINDOW_RANGE: RangeInclusive<f64> = 1.0..=256.0;
pub const LEVEL_RANGE: RangeInclusive<usize> = 6..=16;
pub const RESOLUTION_RANGE: RangeInclusive<usize> = 64..=16384;
pub const EPSILON_RANGE: RangeInclusive<f64> = 1e-6..=0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Continuity,
    Prop61,
    Thm41,
    Symmetry,
}

/// Contents of a `verify` or `sweep` config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub config: ExperimentConfig,
}

/// Global flags shared by every command.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub window: Option<f64>,
    pub levels: Option<usize>,
    pub resolution: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance_file: Option<PathBuf>,
}

fn in_range<T: PartialOrd + std::fmt::Display>(name: &str, v: T, r: &RangeInclusive<T>) -> Result<()> {
    if r.contains(&v) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} = {v} outside [{}, {}]",
            r.start(),
            r.end()
        )))
    }
}

impl Overrides {
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.grid {
            in_range("--grid", n, &NODE_RANGE)?;
            if n % 2 == 0 {
                return Err(Error::Parameter(format!("--grid = {n} must be odd")));
            }
        }
        if let Some(l) = self.window {
            in_range("--window", l, &WINDOW_RANGE)?;
        }
        if let Some(k) = self.levels {
            in_range("--levels", k, &LEVEL_RANGE)?;
        }
        if let Some(r) = self.resolution {
            in_range("--resolution", r, &RESOLUTION_RANGE)?;
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Result<Option<Tolerances>> {
        match &self.tolerance_file {
            Some(p) => Ok(Some(from_json(&read_text(p)?)?)),
            None => Ok(None),
        }
    }

    pub fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        self.validate()?;
        if let Some(n) = self.grid {
            cfg.grid.nodes = n;
        }
        if let Some(l) = self.window {
            cfg.grid.half_extent = l;
            cfg.grid.field_extent = cfg.grid.field_extent.min(0.5 * l);
        }
        if let Some(k) = self.levels {
            cfg.grid.levels = k;
        }
        if let Some(r) = self.resolution {
            cfg.grid.resolution = r;
        }
        if let Some(s) = self.seed {
            cfg.seeds = vec![s];
        }
        if let Some(t) = self.tolerances()? {
            cfg.tolerances = t;
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let mut rc: RunConfig = from_json(&read_text(path)?)?;
        overrides.apply(&mut rc.config)?;
        rc.validate()?;
        Ok(rc)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.config.grid;
        in_range("grid.nodes", g.nodes, &NODE_RANGE)?;
        in_range("grid.half_extent", g.half_extent, &WINDOW_RANGE)?;
        in_range("grid.levels", g.levels, &LEVEL_RANGE)?;
        in_range("grid.resolution", g.resolution, &RESOLUTION_RANGE)?;
        for &e in &self.config.epsilon_ladder {
            in_range("epsilon", e, &EPSILON_RANGE)?;
        }
        self.config.validate()
    }
}
