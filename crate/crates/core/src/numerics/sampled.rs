use super::grid::LineGrid;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::Arc;

const TAIL_TOL: f64 = 1e-12;

/// Complex samples on a [`LineGrid`], piecewise linear between nodes.
/// With a support half-extent `L_b`, the function is constant beyond
/// `±L_b` and extends constantly past the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLineFunction {
    grid: Arc<LineGrid>,
    values: Vec<Complex64>,
    support: Option<f64>,
}

impl SampledLineFunction {
    pub fn new(grid: Arc<LineGrid>, values: Vec<Complex64>, support: Option<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Invariant(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Invariant("non-finite sample".into()));
        }
        if let Some(lb) = support {
            if !(lb >= 0.0) || lb > grid.half_extent() * (1.0 + 1e-12) {
                return Err(Error::Invariant(format!("support {lb} outside grid")));
            }
            let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
            let x = grid.nodes();
            let (left, right) = (values[0], values[values.len() - 1]);
            for (k, v) in values.iter().enumerate() {
                let tail = if x[k] < -lb {
                    Some(left)
                } else if x[k] > lb {
                    Some(right)
                } else {
                    None
                };
                if let Some(t) = tail {
                    if (v - t).norm() > TAIL_TOL * scale {
                        return Err(Error::Invariant(format!(
                            "value at x={} differs from its tail constant",
                            x[k]
                        )));
                    }
                }
            }
        }
        Ok(SampledLineFunction { grid, values, support })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Arc<LineGrid>, support: Option<f64>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid, values, support)
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: Arc<LineGrid>, support: Option<f64>, f: F) -> Result<Self> {
        Self::from_fn(grid, support, |x| Complex64::new(f(x), 0.0))
    }

    /// Build from samples and record the tightest support found in them.
    /// `tol` is relative to the largest sample; tail samples are snapped to
    /// their end constants.
    pub fn with_detected_support(grid: Arc<LineGrid>, mut values: Vec<Complex64>, tol: f64) -> Result<Self> {
        let lb = detect_support(grid.nodes(), &values, tol);
        let n = values.len();
        let (left, right) = (values[0], values[n - 1]);
        for (k, &x) in grid.nodes().iter().enumerate() {
            if x < -lb {
                values[k] = left;
            } else if x > lb {
                values[k] = right;
            }
        }
        Self::new(grid, values, Some(lb))
    }

    pub fn constant(grid: Arc<LineGrid>, c: Complex64) -> Self {
        let n = grid.len();
        SampledLineFunction { grid, values: vec![c; n], support: Some(0.0) }
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<LineGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn support(&self) -> Option<f64> {
        self.support
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn left_tail(&self) -> Complex64 {
        self.values[0]
    }

    pub fn right_tail(&self) -> Complex64 {
        self.values[self.values.len() - 1]
    }

    /// True when `[a, b]` can be evaluated without leaving the data.
    pub fn covers(&self, a: f64, b: f64) -> bool {
        self.support.is_some() || (self.grid.contains(a) && self.grid.contains(b))
    }

    /// Piecewise-linear value; constant beyond the grid ends.
    pub fn value_at(&self, x: f64) -> Complex64 {
        let nodes = self.grid.nodes();
        let n = nodes.len();
        if x <= nodes[0] {
            return self.values[0];
        }
        if x >= nodes[n - 1] {
            return self.values[n - 1];
        }
        let (k, t) = self.grid.locate(x);
        self.values[k] * (1.0 - t) + self.values[k + 1] * t
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        let values: Vec<Complex64> = self.values.iter().map(|&v| f(v)).collect();
        Self::new(self.grid.clone(), values, self.support)
    }

    pub fn map_indexed<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        let values: Vec<Complex64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| f(x, v))
            .collect();
        Self::new(self.grid.clone(), values, self.support)
    }

    /// `a*self + b*other` on a shared grid; support is the wider of the two.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.grid.nodes() != other.grid.nodes() {
            return Err(Error::Parameter("functions live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        let support = match (self.support, other.support) {
            (Some(p), Some(q)) => Some(p.max(q)),
            _ => None,
        };
        Self::new(self.grid.clone(), values, support)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SampledLineFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            support: self.support,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Same samples with the support flag cleared.
    pub fn without_support(&self) -> Self {
        SampledLineFunction { support: None, ..self.clone() }
    }
}

/// Smallest symmetric half-extent outside which the samples are constant.
pub fn detect_support(nodes: &[f64], values: &[Complex64], tol: f64) -> f64 {
    let n = values.len();
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let tol = tol * scale;
    let left = values[0];
    let right = values[n - 1];
    let mut lo = 0;
    while lo + 1 < n && (values[lo + 1] - left).norm() <= tol {
        lo += 1;
    }
    let mut hi = n - 1;
    while hi > 0 && (values[hi - 1] - right).norm() <= tol {
        hi -= 1;
    }
    if lo >= hi {
        return 0.0;
    }
    nodes[lo].abs().max(nodes[hi].abs())
}

/// Trapezoid integral over `[a, b]` of the piecewise-linear interpolant,
/// with partial end cells.
pub fn integrate_line(f: &SampledLineFunction, a: f64, b: f64) -> Result<Complex64> {
    let grid = f.grid();
    if !grid.contains(a) || !grid.contains(b) {
        return Err(Error::Domain(format!(
            "[{a}, {b}] not inside [{}, {}]",
            grid.nodes()[0],
            grid.nodes()[grid.len() - 1]
        )));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a > b {
        return integrate_line(f, b, a).map(|v| -v);
    }
    Ok(integrate_sorted(grid.nodes(), f.values(), grid, a, b))
}

fn integrate_sorted(
    nodes: &[f64],
    values: &[Complex64],
    grid: &LineGrid,
    a: f64,
    b: f64,
) -> Complex64 {
    let n = nodes.len();
    let a = a.max(nodes[0]);
    let b = b.min(nodes[n - 1]);
    let (ka, ta) = grid.locate(a);
    let (kb, tb) = grid.locate(b);
    let lerp = |k: usize, t: f64| values[k] * (1.0 - t) + values[k + 1] * t;
    let fa = lerp(ka, ta);
    let fb = lerp(kb, tb);
    if ka == kb {
        return (fa + fb) * (0.5 * (b - a));
    }
    let mut acc = (fa + values[ka + 1]) * (0.5 * (nodes[ka + 1] - a));
    for k in ka + 1..kb {
        acc += (values[k] + values[k + 1]) * (0.5 * (nodes[k + 1] - nodes[k]));
    }
    acc += (values[kb] + fb) * (0.5 * (b - nodes[kb]));
    acc
}

/// Running trapezoid integral `∫_origin^{x_k}` at every node.
pub fn cumulative_from(nodes: &[f64], values: &[Complex64], origin_index: usize) -> Vec<Complex64> {
    let n = nodes.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in origin_index + 1..n {
        out[k] = out[k - 1] + (values[k - 1] + values[k]) * (0.5 * (nodes[k] - nodes[k - 1]));
    }
    for k in (0..origin_index).rev() {
        out[k] = out[k + 1] - (values[k] + values[k + 1]) * (0.5 * (nodes[k + 1] - nodes[k]));
    }
    out
}
