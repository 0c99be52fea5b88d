use crate::error::Result;
use crate::numerics::{HalfPlaneField, HalfPlaneGrid, SampledLineFunction};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// `∫ P_z(t) u(t) dt` with `P_z(t) = (1/π) |y| / ((x-t)² + y²)`, integrated
/// exactly against the piecewise-linear interpolant and the constant tails.
pub fn poisson_at(u: &SampledLineFunction, x: f64, y: f64) -> Complex64 {
    let eta = y.abs();
    let t = u.nodes();
    let v = u.values();
    let n = t.len();
    let angle = |s: f64| ((s - x) / eta).atan();
    let logr = |s: f64| 0.5 * ((s - x) * (s - x) + eta * eta).ln();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut a0 = angle(t[0]);
    let mut b0 = logr(t[0]);
    for k in 0..n - 1 {
        let a1 = angle(t[k + 1]);
        let b1 = logr(t[k + 1]);
        let slope = (v[k + 1] - v[k]) / (t[k + 1] - t[k]);
        let at_x = v[k] + slope * (x - t[k]);
        acc += at_x * ((a1 - a0) / PI) + slope * (eta * (b1 - b0) / PI);
        a0 = a1;
        b0 = b1;
    }
    let right = 0.5 - angle(t[n - 1]) / PI;
    let left = 0.5 + angle(t[0]) / PI;
    acc + v[n - 1] * right + v[0] * left
}

pub fn poisson_extend(u: &SampledLineFunction, grid: &Arc<HalfPlaneGrid>) -> Result<HalfPlaneField> {
    let cols = grid.cols();
    let values = crate::par::map_range(grid.len(), |i| {
        let z = grid.point(i / cols, i % cols);
        poisson_at(u, z.re, z.im)
    });
    HalfPlaneField::new(grid.clone(), values)
}
