use super::grid::HalfPlaneGrid;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Complex values on a [`HalfPlaneGrid`], stored row by row (largest
/// height first).
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneField {
    grid: Arc<HalfPlaneGrid>,
    values: Vec<Complex64>,
}

impl HalfPlaneField {
    pub fn new(grid: Arc<HalfPlaneGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Invariant(format!(
                "{} values for {} grid nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Invariant("non-finite field value".into()));
        }
        Ok(HalfPlaneField { grid, values })
    }

    pub fn from_fn<F>(grid: Arc<HalfPlaneGrid>, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Sync + Send,
    {
        let cols = grid.cols();
        let values = crate::par::map_range(grid.len(), |i| f(grid.point(i / cols, i % cols)));
        Self::new(grid, values)
    }

    pub fn zeros(grid: Arc<HalfPlaneGrid>) -> Self {
        let n = grid.len();
        HalfPlaneField { grid, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn grid(&self) -> &HalfPlaneGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<HalfPlaneGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.grid.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        let c = self.grid.cols();
        &self.values[row * c..(row + 1) * c]
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &Self, f: F) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Parameter("fields live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `∬ w(|y|) g(value) dx dy` with the grid's area weights.
    pub fn integrate<F>(&self, weight: F) -> f64
    where
        F: Fn(f64, Complex64) -> f64 + Sync + Send,
    {
        let (wx, wy) = self.grid.area_weights();
        let cols = self.grid.cols();
        let heights = self.grid.heights();
        let rows = crate::par::map_range(self.grid.rows(), |j| {
            let y = heights[j];
            let row = &self.values[j * cols..(j + 1) * cols];
            row.iter().zip(&wx).map(|(&v, &w)| w * weight(y, v)).sum::<f64>() * wy[j]
        });
        rows.into_iter().sum()
    }
}
