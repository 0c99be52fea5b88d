use crate::error::{Error, Result};
use crate::numerics::SampledLineFunction;
use num_complex::Complex64;
use std::f64::consts::PI;

/// `(1/π) p.v. ∫ f(t)/(x - t) dt` at the grid nodes, by exact integration of
/// the piecewise linear interpolant of `f - c` with `c` the tail value.
pub fn hilbert_transform(f: &SampledLineFunction) -> Result<SampledLineFunction> {
    let x = f.nodes();
    let n = x.len();
    let (l, r) = (f.values()[0], f.values()[n - 1]);
    let scale = f.sup_norm().max(1e-300);
    if (l - r).norm() > 1e-6 * scale.max(1.0) {
        return Err(Error::Domain("Hilbert transform needs equal tail values".into()));
    }
    let c = 0.5 * (l + r);
    let v: Vec<Complex64> = f.values().iter().map(|&a| a - c).collect();
    let out = crate::par::map_range(n, |i| {
        let xi = x[i];
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n - 1 {
            let (t0, t1) = (x[k], x[k + 1]);
            let d = t1 - t0;
            let s = (v[k + 1] - v[k]) / d;
            if k + 1 == i {
                acc += v[i] * d.ln() - s * d;
            } else if k == i {
                acc += -v[i] * d.ln() - s * d;
            } else {
                let at = v[k] + s * (xi - t0);
                acc += at * ((xi - t0) / (xi - t1)).abs().ln() - s * d;
            }
        }
        acc / PI
    });
    SampledLineFunction::new(f.grid_arc().clone(), out, None)
}
