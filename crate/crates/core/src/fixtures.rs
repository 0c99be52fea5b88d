//! Smooth compactly supported profiles used by the calibration suite.

use crate::curve::TangentAngle;
use crate::error::Result;
use crate::numerics::{make_line_grid, HalfPlaneGrid, LineGrid, Orientation, SampledLineFunction, Spacing};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const DEFAULT_NODES: usize = 2049;
pub const DEFAULT_HALF_EXTENT: f64 = 16.0;
pub const DEFAULT_LEVELS: usize = 8;
/// Every suite profile vanishes outside this interval.
pub const SUITE_SUPPORT: f64 = 4.0;

fn flat(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth step from 0 (x ≤ 0) to 1 (x ≥ 1).
pub fn smooth_step(x: f64) -> f64 {
    let a = flat(x);
    let b = flat(1.0 - x);
    a / (a + b)
}

/// Unit-height bump supported on [-2, 2].
pub fn bump(x: f64) -> f64 {
    let q = 1.0 - (x / 2.0) * (x / 2.0);
    if q <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / q).exp()
    }
}

/// Opposite bumps on [-3.5, -0.5] and [0.5, 3.5].
pub fn two_bump(x: f64) -> f64 {
    let r = 1.5;
    let one = |t: f64| {
        let q = 1.0 - (t / r) * (t / r);
        if q <= 0.0 {
            0.0
        } else {
            (1.0 - 1.0 / q).exp()
        }
    };
    one(x + 2.0) - one(x - 2.0)
}

/// Plateau of height one on [-2.5, 2.5] with smooth ramps inside [-3.5, 3.5].
pub fn smoothed_step_pair(x: f64) -> f64 {
    smooth_step(x + 3.5) * smooth_step(3.5 - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Zero,
    Bump,
    TwoBump,
    SmoothedStepPair,
}

impl Profile {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Bump => bump(x),
            Profile::TwoBump => two_bump(x),
            Profile::SmoothedStepPair => smoothed_step_pair(x),
        }
    }

    pub fn support(self) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Bump => 2.0,
            Profile::TwoBump | Profile::SmoothedStepPair => 3.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Zero => "zero",
            Profile::Bump => "bump",
            Profile::TwoBump => "two-bump",
            Profile::SmoothedStepPair => "smoothed-step-pair",
        }
    }
}

/// A scaled profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub profile: Profile,
    pub amplitude: f64,
}

impl Member {
    pub fn new(profile: Profile, amplitude: f64) -> Self {
        Member { profile, amplitude }
    }

    pub fn label(&self) -> String {
        format!("{}*{}", self.amplitude, self.profile.name())
    }

    pub fn sample(&self, grid: &Arc<LineGrid>) -> Result<SampledLineFunction> {
        let a = self.amplitude;
        let p = self.profile;
        SampledLineFunction::from_real_fn(grid.clone(), Some(p.support().max(grid.min_spacing())), |x| {
            a * p.eval(x)
        })
    }

    pub fn angle(&self, grid: &Arc<LineGrid>) -> Result<TangentAngle> {
        TangentAngle::new(self.sample(grid)?)
    }
}

/// The calibration suite of tangent angles.
pub fn calibration_suite() -> Vec<Member> {
    vec![
        Member::new(Profile::Zero, 0.0),
        Member::new(Profile::Bump, 0.1),
        Member::new(Profile::Bump, 0.3),
        Member::new(Profile::TwoBump, 0.3),
        Member::new(Profile::SmoothedStepPair, 0.5),
    ]
}

pub fn default_line_grid() -> Arc<LineGrid> {
    Arc::new(make_line_grid(DEFAULT_HALF_EXTENT, DEFAULT_NODES, Spacing::Uniform).expect("valid default grid"))
}

pub fn line_grid(half_extent: f64, nodes: usize) -> Result<Arc<LineGrid>> {
    Ok(Arc::new(make_line_grid(half_extent, nodes, Spacing::Uniform)?))
}

/// Dyadic grid over `[-x_extent, x_extent]` sharing the spacing of `line`.
pub fn field_grid(
    line: &LineGrid,
    x_extent: f64,
    levels: usize,
    sub_levels: usize,
    orientation: Orientation,
) -> Result<Arc<HalfPlaneGrid>> {
    let h = line.max_spacing();
    let cells = (x_extent / h).round() as usize;
    let x = make_line_grid(h * cells as f64, 2 * cells + 1, Spacing::Uniform)?;
    Ok(Arc::new(HalfPlaneGrid::dyadic(x, 1.0, levels, sub_levels, orientation)?))
}
