use crate::error::{Error, Result};
use crate::fixtures::{self, Member, Profile};
use crate::numerics::{LineGrid, Orientation, HalfPlaneGrid};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::sync::Arc;

/// Discretization shared by every experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    /// Nodes of the line grid.
    pub nodes: usize,
    /// Half width of the line window.
    pub half_extent: f64,
    /// Dyadic levels of the half-plane grids.
    pub levels: usize,
    /// Heights per octave.
    pub sub_levels: usize,
    /// Half width of the half-plane grids.
    pub field_extent: f64,
    /// Zipper boundary cells.
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nodes: fixtures::DEFAULT_NODES,
            half_extent: fixtures::DEFAULT_HALF_EXTENT,
            levels: fixtures::DEFAULT_LEVELS,
            sub_levels: 2,
            field_extent: 8.0,
            resolution: crate::welding::DEFAULT_RESOLUTION,
        }
    }
}

impl GridSpec {
    pub fn line(&self) -> Result<Arc<LineGrid>> {
        fixtures::line_grid(self.half_extent, self.nodes)
    }

    pub fn field(&self, line: &LineGrid, orientation: Orientation) -> Result<Arc<HalfPlaneGrid>> {
        fixtures::field_grid(line, self.field_extent, self.levels, self.sub_levels, orientation)
    }
}

/// Per-check thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Largest accepted `d(ε)` at the smallest ε.
    pub continuity_final: f64,
    /// Relative increase tolerated between ladder points.
    pub monotone_slack: f64,
    /// Bracket for the reverse-direction ratio `‖b_ε - b‖ / (ε ‖w‖)`.
    pub reverse_bracket: f64,
    /// Largest accepted max/min ratio across a ladder.
    pub ratio_spread: f64,
    /// Relative mismatch accepted between the two half planes.
    pub half_plane_match: f64,
    pub trace_gap: f64,
    pub self_convergence: f64,
    pub symmetry: f64,
    pub roundtrip: f64,
    pub holomorphy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            continuity_final: 0.05,
            monotone_slack: 0.1,
            reverse_bracket: 3.0,
            ratio_spread: 2.0,
            half_plane_match: 0.2,
            trace_gap: 2e-3,
            self_convergence: 1e-3,
            symmetry: 2e-3,
            roundtrip: 1e-3,
            holomorphy: 5e-2,
        }
    }
}

impl Tolerances {
    fn all(&self) -> [(&'static str, f64); 10] {
        [
            ("continuity_final", self.continuity_final),
            ("monotone_slack", self.monotone_slack),
            ("reverse_bracket", self.reverse_bracket),
            ("ratio_spread", self.ratio_spread),
            ("half_plane_match", self.half_plane_match),
            ("trace_gap", self.trace_gap),
            ("self_convergence", self.self_convergence),
            ("symmetry", self.symmetry),
            ("roundtrip", self.roundtrip),
            ("holomorphy", self.holomorphy),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub base: Member,
    pub perturbation: Member,
    /// Strictly decreasing positive amplitudes.
    pub epsilon_ladder: Vec<f64>,
    pub grid: GridSpec,
    pub seeds: Vec<u64>,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            base: Member::new(Profile::Zero, 0.0),
            perturbation: Member::new(Profile::Bump, 1.0),
            epsilon_ladder: vec![0.2, 0.1, 0.05, 0.025],
            grid: GridSpec::default(),
            seeds: vec![1],
            tolerances: Tolerances::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon_ladder.is_empty()
            || self.epsilon_ladder.iter().any(|e| !(*e > 0.0))
            || self.epsilon_ladder.windows(2).any(|w| !(w[1] < w[0]))
        {
            return Err(Error::Parameter("epsilon ladder must be strictly decreasing and positive".into()));
        }
        for (name, v) in self.tolerances.all() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Parameter(format!("tolerance {name} must be positive")));
            }
        }
        if self.grid.nodes < crate::numerics::MIN_LINE_NODES || self.grid.resolution < 16 {
            return Err(Error::Parameter("grid too coarse".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
