use crate::error::{Error, Result};
use num_complex::Complex64;

/// Sampled boundary map: increasing real nodes to real (monotone) or
/// complex values. Piecewise linear inside, affine beyond the end cells.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneBoundaryMap {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    monotone_real: bool,
}

impl MonotoneBoundaryMap {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>, monotone_real: bool) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::Invariant("map needs matching nodes and values, at least two".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invariant("map nodes not strictly increasing".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Invariant("non-finite map value".into()));
        }
        if monotone_real {
            if values.iter().any(|v| v.im != 0.0) {
                return Err(Error::Invariant("monotone map has complex values".into()));
            }
            if let Some(k) = values.windows(2).position(|w| !(w[1].re > w[0].re)) {
                return Err(Error::Invariant(format!(
                    "map not strictly increasing at node {k} ({} -> {})",
                    values[k].re,
                    values[k + 1].re
                )));
            }
        } else if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invariant("consecutive map values coincide".into()));
        }
        Ok(MonotoneBoundaryMap { nodes, values, monotone_real })
    }

    pub fn real(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(nodes, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(), true)
    }

    pub fn identity(nodes: Vec<f64>) -> Result<Self> {
        let values = nodes.clone();
        Self::real(nodes, values)
    }

    pub fn from_fn<F: Fn(f64) -> f64>(nodes: Vec<f64>, f: F) -> Result<Self> {
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::real(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn is_monotone_real(&self) -> bool {
        self.monotone_real
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn cell(&self, x: f64) -> usize {
        let n = self.nodes.len();
        self.nodes.partition_point(|&v| v <= x).clamp(1, n - 1) - 1
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let k = self.cell(x);
        let t = (x - self.nodes[k]) / (self.nodes[k + 1] - self.nodes[k]);
        self.values[k] * (1.0 - t) + self.values[k + 1] * t
    }

    pub fn eval_re(&self, x: f64) -> f64 {
        self.eval(x).re
    }

    /// Slope of the interpolant at `x` (end-cell slope outside).
    pub fn slope(&self, x: f64) -> Complex64 {
        let k = self.cell(x);
        (self.values[k + 1] - self.values[k]) / (self.nodes[k + 1] - self.nodes[k])
    }

    pub fn resample(&self, nodes: Vec<f64>) -> Result<Self> {
        let values = nodes.iter().map(|&x| self.eval(x)).collect();
        Self::new(nodes, values, self.monotone_real)
    }

    pub fn map_values<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        let values: Vec<Complex64> = self.values.iter().map(|&v| f(v)).collect();
        let real = self.monotone_real && values.iter().all(|v| v.im == 0.0);
        Self::new(self.nodes.clone(), values, real)
    }
}

pub fn invert_monotone(h: &MonotoneBoundaryMap) -> Result<MonotoneBoundaryMap> {
    if !h.is_monotone_real() {
        return Err(Error::Invariant("inverse requires a real increasing map".into()));
    }
    MonotoneBoundaryMap::real(h.real_values(), h.nodes().to_vec())
}

/// `a ∘ b` sampled at the nodes of `b`.
pub fn compose_maps(a: &MonotoneBoundaryMap, b: &MonotoneBoundaryMap) -> Result<MonotoneBoundaryMap> {
    if b.values().iter().any(|v| v.im != 0.0) {
        return Err(Error::Invariant("inner map must be real valued".into()));
    }
    let values = b.values().iter().map(|v| a.eval(v.re)).collect();
    MonotoneBoundaryMap::new(
        b.nodes().to_vec(),
        values,
        a.is_monotone_real() && b.is_monotone_real(),
    )
}
