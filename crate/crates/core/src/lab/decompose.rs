use super::config::Tolerances;
use super::report::{Check, ExperimentReport, Provenance};
use super::{digest, run_check};
use crate::curve::{chord_angles, gamma_u};
use crate::error::{Error, Result};
use crate::numerics::{invert_monotone, make_line_grid, MonotoneBoundaryMap, SampledLineFunction, Spacing};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// `h = origin + z_b ∘ g` with `g` increasing, `g(0) = 0`, and `z_b` the
/// unit-speed curve of the angle `b`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub g: MonotoneBoundaryMap,
    /// Tangent angle on a uniform symmetric arc grid.
    pub angle: SampledLineFunction,
    pub origin: Complex64,
}

impl Decomposition {
    /// `origin + z_b(g(x))` at the given nodes.
    pub fn reconstruct(&self, nodes: &[f64]) -> Result<Vec<Complex64>> {
        let (z, _) = gamma_u(&self.angle)?;
        Ok(nodes.iter().map(|&x| self.origin + z.eval(self.g.eval_re(x))).collect())
    }
}

fn interpolate(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1) - 1;
    let t = ((x - xs[k]) / (xs[k + 1] - xs[k])).clamp(0.0, 1.0);
    vs[k] * (1.0 - t) + vs[k + 1] * t
}

/// Arc length `g` from cumulative chord lengths and the angle `b` from
/// unwrapped chord arguments.
pub fn decompose(h: &MonotoneBoundaryMap) -> Result<Decomposition> {
    let x = h.nodes();
    let z = h.values();
    let n = x.len();
    if !(x[0] < 0.0 && x[n - 1] > 0.0) {
        return Err(Error::Range("decomposition needs 0 inside the parameter range".into()));
    }
    let theta = chord_angles(z)?;
    let mut arc = vec![0.0; n];
    for k in 1..n {
        let l = (z[k] - z[k - 1]).norm();
        if !(l > 1e-12 * (x[k] - x[k - 1])) {
            return Err(Error::Degenerate(format!("vanishing chord at node {k}")));
        }
        arc[k] = arc[k - 1] + l;
    }
    let origin = h.eval(0.0);
    let k0 = x.partition_point(|&v| v <= 0.0) - 1;
    let a0 = arc[k0] + (origin - z[k0]).norm();
    let g: Vec<f64> = arc.iter().map(|a| a - a0).collect();
    let g = MonotoneBoundaryMap::real(x.to_vec(), g)?;
    let gv = g.real_values();

    let extent = (-gv[0]).max(gv[n - 1]);
    let step = (gv[n - 1] - gv[0]) / (n - 1) as f64;
    let count = (2.0 * extent / step).ceil() as usize / 2 * 2 + 1;
    let grid = Arc::new(make_line_grid(extent, count, Spacing::Uniform)?);
    let mid: Vec<f64> = gv.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let angle = SampledLineFunction::from_real_fn(grid, None, |s| interpolate(&mid, &theta, s))?;
    Ok(Decomposition { g, angle, origin })
}

fn cell_log_slopes(x: &[f64], z: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(x.len() - 1);
    for k in 0..x.len() - 1 {
        let mut l = ((z[k + 1] - z[k]) / (x[k + 1] - x[k])).ln();
        if let Some(p) = out.last() {
            l.im += 2.0 * PI * ((p.im - l.im) / (2.0 * PI)).round();
        }
        out.push(l);
    }
    out
}

fn wrap(d: f64) -> f64 {
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

/// Decompose `h`, rebuild it from `(g, b)` and compare values and
/// log-derivatives.
pub fn decomposition_roundtrip(h: &MonotoneBoundaryMap, tol: &Tolerances) -> Result<ExperimentReport> {
    let x = h.nodes();
    let re: Vec<f64> = h.values().iter().map(|v| v.re).collect();
    let im: Vec<f64> = h.values().iter().map(|v| v.im).collect();
    let provenance = Provenance::of_inputs(digest(&[x, &re, &im]));
    let rebuilt = decompose(h).and_then(|d| d.reconstruct(x));
    let mut checks = Vec::new();
    checks.push(run_check("reconstruction", || {
        let r = rebuilt.clone()?;
        let gap = r.iter().zip(h.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        Ok(Check::new("reconstruction", gap <= tol.roundtrip).with("sup gap", gap).with("threshold", tol.roundtrip))
    }));
    checks.push(run_check("log-derivative", || {
        let r = rebuilt.clone()?;
        let a = cell_log_slopes(x, &r);
        let b = cell_log_slopes(x, h.values());
        let gap = a
            .iter()
            .zip(&b)
            .map(|(p, q)| (p.re - q.re).abs().max(wrap(p.im - q.im).abs()))
            .fold(0.0, f64::max);
        Ok(Check::new("log-derivative", gap <= tol.roundtrip).with("sup gap", gap).with("threshold", tol.roundtrip))
    }));
    Ok(ExperimentReport::new("decomposition-roundtrip", provenance, checks))
}

/// Boundary map with `log h' = log h0' + w`, built as `z̃ ∘ g0` where
/// `z̃' = exp(i b0 + w ∘ g0⁻¹)` and `(g0, b0)` decompose `h0`.
pub fn perturb_log_derivative(h0: &MonotoneBoundaryMap, w: &SampledLineFunction) -> Result<MonotoneBoundaryMap> {
    let d = decompose(h0)?;
    let ginv = invert_monotone(&d.g)?;
    let u = d.angle.map_indexed(|s, b| b - Complex64::i() * w.value_at(ginv.eval_re(s)))?;
    let (z, _) = gamma_u(&u)?;
    let values: Vec<Complex64> = h0.nodes().iter().map(|&x| d.origin + z.eval(d.g.eval_re(x))).collect();
    crate::welding::check_jordan(&values)?;
    let real = values.iter().all(|v| v.im == 0.0);
    MonotoneBoundaryMap::new(h0.nodes().to_vec(), values, real && h0.is_monotone_real())
}
