use super::{NormMethod, NormReport};
use crate::error::Result;
use crate::numerics::{integrate_line, SampledLineFunction};
use std::f64::consts::PI;

/// Exclusion band as a multiple of the largest grid cell.
pub const BAND_CELLS: f64 = 2.0;

/// `(1/4π²) ∬_{|s-t|>δ} |u(s)-u(t)|²/(s-t)²` over the grid square, plus
/// the closed-form contribution of the constant extensions past the window.
pub fn h12_seminorm(u: &SampledLineFunction) -> NormReport {
    let x = u.nodes();
    let v = u.values();
    let n = x.len();
    let w = u.grid().trapezoid_weights();
    let band = BAND_CELLS * u.grid().max_spacing();

    let inner = crate::par::sum_range(n, |i| {
        let mut row = 0.0;
        for j in 0..n {
            let d = x[i] - x[j];
            if d.abs() > band {
                row += w[j] * (v[i] - v[j]).norm_sqr() / (d * d);
            }
        }
        w[i] * row
    });

    // constant extension past both ends; unequal tails only diverge for
    // functions that declare a support
    let (left, right) = (u.left_tail(), u.right_tail());
    let scale = v.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let tails = if u.support().is_some() && (left - right).norm() > 1e-12 * scale {
        f64::INFINITY
    } else {
        let (a, b) = (x[0], x[n - 1]);
        let mut acc = 0.0;
        for j in 0..n {
            acc += w[j] * (right - v[j]).norm_sqr() / (b - x[j]).max(band);
            acc += w[j] * (left - v[j]).norm_sqr() / (x[j] - a).max(band);
        }
        2.0 * acc
    };

    NormReport {
        value: ((inner + tails) / (4.0 * PI * PI)).sqrt(),
        grid_size: vec![n],
        exclusion_band: band,
        method: NormMethod::DoubleIntegral,
    }
}

pub fn h12_value(u: &SampledLineFunction) -> f64 {
    h12_seminorm(u).value
}

/// Representative of `u` modulo constants: subtract the mean over the
/// support (or the whole grid when no support is recorded).
pub fn remove_mean(u: &SampledLineFunction) -> Result<SampledLineFunction> {
    let l = u.support().unwrap_or(u.grid().half_extent());
    let mean = if l > 0.0 {
        integrate_line(u, -l, l)? / (2.0 * l)
    } else {
        u.values()[0]
    };
    u.map(|v| v - mean)
}

