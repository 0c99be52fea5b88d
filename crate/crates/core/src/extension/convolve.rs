use super::kernels::{kernel_eval, KernelSpec, Profile};
use crate::error::{Error, Result};
use crate::numerics::{MonotoneBoundaryMap, SampledLineFunction};
use num_complex::Complex64;

/// Minimum number of sub-nodes across a kernel window.
pub const MIN_SUBNODES: usize = 257;
/// Sub-nodes per data cell.
pub const SUBNODES_PER_CELL: usize = 4;

/// Line data that can be read inside a kernel window.
pub trait LineData: Sync {
    fn value_at(&self, x: f64) -> Complex64;
    fn covers(&self, a: f64, b: f64) -> bool;
    fn resolution(&self) -> f64;
}

impl LineData for SampledLineFunction {
    fn value_at(&self, x: f64) -> Complex64 {
        SampledLineFunction::value_at(self, x)
    }
    fn covers(&self, a: f64, b: f64) -> bool {
        SampledLineFunction::covers(self, a, b)
    }
    fn resolution(&self) -> f64 {
        self.grid().min_spacing()
    }
}

impl LineData for MonotoneBoundaryMap {
    fn value_at(&self, x: f64) -> Complex64 {
        self.eval(x)
    }
    fn covers(&self, _: f64, _: f64) -> bool {
        true
    }
    fn resolution(&self) -> f64 {
        self.nodes()
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Odd sub-node count resolving both the kernel and the data.
pub fn subnode_count(eta: f64, resolution: f64) -> usize {
    let cells = (2.0 * eta / resolution).ceil() as usize;
    let m = (SUBNODES_PER_CELL * cells + 1).max(MIN_SUBNODES);
    m | 1
}

/// Trapezoid tables for `∫ K(s) w(x - ηs) ds` at a fixed scale.
pub(crate) struct Window {
    eta: f64,
    offsets: Vec<f64>,
    tables: Vec<Vec<f64>>,
}

impl Window {
    pub(crate) fn new(eta: f64, resolution: f64, profiles: &[Profile]) -> Window {
        let m = subnode_count(eta, resolution);
        let ds = 2.0 / (m - 1) as f64;
        let s: Vec<f64> = (0..m).map(|i| -1.0 + ds * i as f64).collect();
        let tables = profiles
            .iter()
            .map(|p| s.iter().map(|&v| p.eval(v) * ds).collect())
            .collect();
        Window { eta, offsets: s.iter().map(|v| eta * v).collect(), tables }
    }

    pub(crate) fn apply<W: LineData + ?Sized>(&self, w: &W, x: f64, out: &mut [Complex64]) -> Result<()> {
        if !w.covers(x - self.eta, x + self.eta) {
            return Err(Error::Domain(format!(
                "kernel window [{}, {}] leaves the data",
                x - self.eta,
                x + self.eta
            )));
        }
        for o in out.iter_mut() {
            *o = Complex64::new(0.0, 0.0);
        }
        for (i, off) in self.offsets.iter().enumerate() {
            let v = w.value_at(x - off);
            for (o, t) in out.iter_mut().zip(&self.tables) {
                *o += v * t[i];
            }
        }
        Ok(())
    }
}

/// `(K_y * w)(x) = ∫ |y|^{-1} K((x-t)/|y|) w(t) dt` on the local window.
pub fn convolve_scaled<W: LineData + ?Sized>(spec: KernelSpec, y: f64, w: &W, x: f64) -> Result<Complex64> {
    if y == 0.0 || !y.is_finite() {
        return Err(Error::Parameter("scale must be non-zero".into()));
    }
    let eta = y.abs();
    if !w.covers(x - eta, x + eta) {
        return Err(Error::Domain(format!("kernel window around {x} leaves the data")));
    }
    let m = subnode_count(eta, w.resolution());
    let ds = 2.0 / (m - 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 1..m - 1 {
        let s = -1.0 + ds * i as f64;
        acc += kernel_eval(spec, s) * w.value_at(x - eta * s);
    }
    Ok(acc * ds)
}

