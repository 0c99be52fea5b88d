use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MIN_LINE_NODES: usize = 16;
pub const MIN_DYADIC_LEVELS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Uniform,
    Graded,
}

/// Strictly increasing nodes symmetric about 0 on `[-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineGrid {
    nodes: Vec<f64>,
    half_extent: f64,
    spacing: Spacing,
}

/// Ratio between the outermost and innermost cell of a graded grid.
const GRADED_SPREAD: f64 = 64.0;

pub fn make_line_grid(half_extent: f64, count: usize, spacing: Spacing) -> Result<LineGrid> {
    if !(half_extent > 0.0) || !half_extent.is_finite() {
        return Err(Error::Parameter(format!("half extent must be positive, got {half_extent}")));
    }
    if count < MIN_LINE_NODES {
        return Err(Error::Parameter(format!("need at least {MIN_LINE_NODES} nodes, got {count}")));
    }
    let nodes = match spacing {
        Spacing::Uniform => {
            let m = (count - 1) as f64;
            (0..count)
                .map(|k| half_extent * (2.0 * k as f64 - m) / m)
                .collect()
        }
        Spacing::Graded => graded_nodes(half_extent, count),
    };
    Ok(LineGrid { nodes, half_extent, spacing })
}

fn graded_nodes(half_extent: f64, count: usize) -> Vec<f64> {
    // odd grids keep 0; even grids drop it from the next odd grid
    let odd = if count % 2 == 1 { count } else { count + 1 };
    let m = (odd - 1) / 2;
    let q = GRADED_SPREAD.powf(1.0 / (m as f64 - 1.0).max(1.0));
    let denom = q.powi(m as i32) - 1.0;
    let mags: Vec<f64> = (1..=m)
        .map(|j| half_extent * (q.powi(j as i32) - 1.0) / denom)
        .collect();
    let mut nodes: Vec<f64> = mags.iter().rev().map(|r| -r).collect();
    if count % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(mags.iter().copied());
    nodes
}

impl LineGrid {
    /// Rebuild a grid from explicit nodes, checking the invariants.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<LineGrid> {
        let n = nodes.len();
        if n < MIN_LINE_NODES {
            return Err(Error::Invariant(format!("grid has {n} nodes, need {MIN_LINE_NODES}")));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invariant("non-finite grid node".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invariant("grid nodes not strictly increasing".into()));
        }
        let half_extent = nodes[n - 1];
        let tol = 1e-9 * half_extent.max(1.0);
        for k in 0..n {
            if (nodes[k] + nodes[n - 1 - k]).abs() > tol {
                return Err(Error::Invariant("grid not symmetric about 0".into()));
            }
        }
        let h0 = nodes[1] - nodes[0];
        let uniform = nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h0).abs() <= 1e-9 * h0);
        let spacing = if uniform { Spacing::Uniform } else { Spacing::Graded };
        Ok(LineGrid { nodes, half_extent, spacing })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn max_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    pub fn min_spacing(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-12 * self.half_extent;
        x >= self.nodes[0] - slack && x <= self.nodes[self.len() - 1] + slack
    }

    /// Cell index `k` and fraction `t` with `x = (1-t) x_k + t x_{k+1}`.
    /// Points beyond the grid are clamped to the end cells (t outside [0,1]).
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.nodes.len();
        let k = match self.spacing {
            Spacing::Uniform => {
                let h = (self.nodes[n - 1] - self.nodes[0]) / (n - 1) as f64;
                let raw = ((x - self.nodes[0]) / h).floor();
                if raw.is_nan() || raw < 0.0 {
                    0
                } else {
                    (raw as usize).min(n - 2)
                }
            }
            Spacing::Graded => self.nodes.partition_point(|&v| v <= x).clamp(1, n - 1) - 1,
        };
        // guard the floor against rounding at cell edges
        let k = if k + 1 < n - 1 && x >= self.nodes[k + 1] {
            k + 1
        } else if k > 0 && x < self.nodes[k] {
            k - 1
        } else {
            k
        };
        let t = (x - self.nodes[k]) / (self.nodes[k + 1] - self.nodes[k]);
        (k, t)
    }

    /// Composite trapezoid weights on the nodes.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut w = vec![0.0; n];
        for k in 0..n - 1 {
            let h = self.nodes[k + 1] - self.nodes[k];
            w[k] += 0.5 * h;
            w[k + 1] += 0.5 * h;
        }
        w
    }

    pub fn index_of(&self, x: f64) -> Option<usize> {
        let (k, t) = self.locate(x);
        if t.abs() < 1e-9 {
            Some(k)
        } else if (t - 1.0).abs() < 1e-9 {
            Some(k + 1)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Upper,
    Lower,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Upper => 1.0,
            Orientation::Lower => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Upper => Orientation::Lower,
            Orientation::Lower => Orientation::Upper,
        }
    }
}

/// Rectangular grid over a half plane: x-nodes times heights that halve
/// toward the real axis, with `sub_levels` geometric steps per octave.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneGrid {
    x: LineGrid,
    heights: Vec<f64>,
    levels: usize,
    sub_levels: usize,
    orientation: Orientation,
}

impl HalfPlaneGrid {
    pub fn dyadic(
        x: LineGrid,
        y_max: f64,
        levels: usize,
        sub_levels: usize,
        orientation: Orientation,
    ) -> Result<HalfPlaneGrid> {
        if !(y_max >= 1.0) || !y_max.is_finite() {
            return Err(Error::Parameter(format!("y_max must be at least 1, got {y_max}")));
        }
        if levels < MIN_DYADIC_LEVELS {
            return Err(Error::Parameter(format!(
                "need at least {MIN_DYADIC_LEVELS} dyadic levels, got {levels}"
            )));
        }
        if sub_levels == 0 {
            return Err(Error::Parameter("sub_levels must be positive".into()));
        }
        let count = (levels - 1) * sub_levels + 1;
        let heights = (0..count)
            .map(|j| y_max * 2f64.powf(-(j as f64) / sub_levels as f64))
            .collect();
        Ok(HalfPlaneGrid { x, heights, levels, sub_levels, orientation })
    }

    /// Grid with explicit decreasing heights.
    pub fn with_heights(x: LineGrid, heights: Vec<f64>, orientation: Orientation) -> Result<HalfPlaneGrid> {
        if heights.len() < 2 || heights.windows(2).any(|w| !(w[1] < w[0])) || heights.iter().any(|h| !(*h > 0.0)) {
            return Err(Error::Invariant("heights must be positive and strictly decreasing".into()));
        }
        let levels = heights.len();
        Ok(HalfPlaneGrid { x, heights, levels, sub_levels: 1, orientation })
    }

    /// Grid with explicit heights that keeps the given level bookkeeping.
    pub fn with_levels(
        x: LineGrid,
        heights: Vec<f64>,
        levels: usize,
        sub_levels: usize,
        orientation: Orientation,
    ) -> Result<HalfPlaneGrid> {
        let g = Self::with_heights(x, heights, orientation)?;
        if levels == 0 || sub_levels == 0 {
            return Err(Error::Invariant("level counts must be positive".into()));
        }
        Ok(HalfPlaneGrid { levels, sub_levels, ..g })
    }

    pub fn x(&self) -> &LineGrid {
        &self.x
    }

    /// Unsigned heights, largest first.
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn sub_levels(&self) -> usize {
        self.sub_levels
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn y_max(&self) -> f64 {
        self.heights[0]
    }

    pub fn y_min(&self) -> f64 {
        self.heights[self.heights.len() - 1]
    }

    pub fn rows(&self) -> usize {
        self.heights.len()
    }

    pub fn cols(&self) -> usize {
        self.x.len()
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Signed y coordinate of row `j`.
    pub fn y(&self, j: usize) -> f64 {
        self.orientation.sign() * self.heights[j]
    }

    pub fn point(&self, j: usize, k: usize) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.x.nodes()[k], self.y(j))
    }

    pub fn flipped(&self) -> HalfPlaneGrid {
        HalfPlaneGrid { orientation: self.orientation.flip(), ..self.clone() }
    }

    /// Area weights for dx dy: trapezoid in x, trapezoid in log y.
    pub fn area_weights(&self) -> (Vec<f64>, Vec<f64>) {
        let wx = self.x.trapezoid_weights();
        let r = self.heights.len();
        let mut wy = vec![0.0; r];
        for j in 0..r - 1 {
            let dt = (self.heights[j] / self.heights[j + 1]).ln();
            wy[j] += 0.5 * dt * self.heights[j];
            wy[j + 1] += 0.5 * dt * self.heights[j + 1];
        }
        (wx, wy)
    }
}
