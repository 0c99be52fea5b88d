use crate::error::{Error, Result};
use crate::numerics::{HalfPlaneField, HalfPlaneGrid};
use crate::spaces::{b2_norm, bers_l2_norm, NormReport};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Largest accepted phase step between neighboring nodes after unwrapping.
pub const UNWRAP_STEP_LIMIT: f64 = 0.5 * PI;

fn nearest_branch(v: Complex64, reference: f64) -> Complex64 {
    let k = ((reference - v.im) / (2.0 * PI)).round();
    Complex64::new(v.re, v.im + 2.0 * PI * k)
}

/// Make the imaginary part continuous: along the top row, then down each
/// column. The first node is put on the principal branch.
pub fn unwrap_log_field(grid: &Arc<HalfPlaneGrid>, mut values: Vec<Complex64>) -> Result<HalfPlaneField> {
    let cols = grid.cols();
    let rows = grid.rows();
    let wrap = |v: f64| v - 2.0 * PI * ((v + PI) / (2.0 * PI)).floor();
    values[0].im = wrap(values[0].im);
    for k in 1..cols {
        let prev = values[k - 1].im;
        values[k] = nearest_branch(values[k], prev);
        if (values[k].im - prev).abs() > UNWRAP_STEP_LIMIT {
            return Err(Error::Unwrap(format!("phase jump {} along the top row", values[k].im - prev)));
        }
    }
    for j in 1..rows {
        for k in 0..cols {
            let prev = values[(j - 1) * cols + k].im;
            let v = nearest_branch(values[j * cols + k], prev);
            if (v.im - prev).abs() > UNWRAP_STEP_LIMIT {
                return Err(Error::Unwrap(format!("phase jump {} at row {j}, column {k}", v.im - prev)));
            }
            values[j * cols + k] = v;
        }
    }
    HalfPlaneField::new(grid.clone(), values)
}

/// Samples of a logarithmic derivative on the grid, unwrapped.
pub fn log_derivative_field<F>(grid: &Arc<HalfPlaneGrid>, log_fp: F) -> Result<HalfPlaneField>
where
    F: Fn(Complex64) -> Complex64 + Sync + Send,
{
    let cols = grid.cols();
    let values = crate::par::map_range(grid.len(), |i| log_fp(grid.point(i / cols, i % cols)));
    unwrap_log_field(grid, values)
}

/// Finite-difference weights for derivatives up to `order` at `t`
/// (Fornberg's recursion).
fn fd_weights(t: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - t;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - t;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Derivative of `order` 1 or 2 along rows, second order accurate, with
/// one-sided stencils at the row ends.
fn row_derivative(f: &HalfPlaneField, order: usize) -> Result<HalfPlaneField> {
    let grid = f.grid_arc().clone();
    let x = grid.x().nodes();
    let cols = grid.cols();
    let width = order + 2;
    if cols < width + 1 {
        return Err(Error::Parameter(format!("need at least {} columns", width + 1)));
    }
    let values = crate::par::map_range(grid.len(), |i| {
        let (j, k) = (i / cols, i % cols);
        let row = f.row(j);
        let (lo, len) = if k == 0 {
            (0, width)
        } else if k == cols - 1 {
            (cols - width, width)
        } else {
            (k - 1, 3)
        };
        let w = fd_weights(x[k], &x[lo..lo + len], order);
        (0..len).map(|m| row[lo + m] * w[order][m]).sum()
    });
    HalfPlaneField::new(grid, values)
}

/// `d/dz` of a holomorphic field by differences along rows.
pub fn holomorphic_derivative(f: &HalfPlaneField) -> Result<HalfPlaneField> {
    row_derivative(f, 1)
}

#[derive(Debug, Clone)]
pub struct SchwarzianReport {
    pub field: HalfPlaneField,
    /// `sup |S| y²`.
    pub b2: NormReport,
    /// `((1/π) ∬ |S|² y²)^{1/2}`.
    pub bers: NormReport,
}

/// `S = N' - N²/2` with `N = (log f')'`.
pub fn schwarzian(log_fp: &HalfPlaneField) -> Result<SchwarzianReport> {
    let n = row_derivative(log_fp, 1)?;
    let dn = row_derivative(log_fp, 2)?;
    let field = dn.zip_with(&n, |d, v| d - 0.5 * v * v)?;
    Ok(SchwarzianReport { b2: b2_norm(&field), bers: bers_l2_norm(&field), field })
}
