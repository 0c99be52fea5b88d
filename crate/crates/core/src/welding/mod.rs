//! Riemann maps onto the two sides of a curve through ∞, their boundary
//! correspondences and the welding homeomorphism.

mod derivative;
mod extend;
mod hilbert;
mod zipper;

pub use derivative::{holomorphic_derivative, log_derivative_field, schwarzian, unwrap_log_field, SchwarzianReport};
pub use extend::{beltrami_compose, beurling_ahlfors_extension, Composition};
pub use hilbert::hilbert_transform;
pub use zipper::{Side, Zipper};
pub(crate) use zipper::check_jordan;

use crate::curve::CurveSamples;
use crate::error::{Error, Result};
use crate::numerics::{HalfPlaneField, HalfPlaneGrid, LineGrid, MonotoneBoundaryMap, Orientation, SampledLineFunction};
use crate::spaces::{dirichlet_seminorm, NormReport};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const DEFAULT_RESOLUTION: usize = 2048;

#[derive(Debug, Clone)]
pub struct RiemannOptions {
    /// Boundary cells over the sampled window.
    pub resolution: usize,
    /// Grid on which `log f'` is sampled, oriented for the left side.
    pub field_grid: Option<Arc<HalfPlaneGrid>>,
    /// Rerun at twice the resolution and report the boundary drift.
    pub self_check: bool,
}

impl Default for RiemannOptions {
    fn default() -> Self {
        RiemannOptions { resolution: DEFAULT_RESOLUTION, field_grid: None, self_check: false }
    }
}

/// Affine gauge `ζ ↦ scale ζ + shift` taking the normalized half plane to
/// the raw zipper coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapNormalization {
    pub shift: f64,
    pub scale: f64,
    pub pivot: [f64; 2],
    /// Length of `f([0, 1])`.
    pub unit_arc: f64,
}

#[derive(Debug, Clone)]
pub struct RiemannMapPair {
    pub side: Side,
    zipper: Arc<Zipper>,
    /// `h(s)`: arc parameter to boundary point of the half plane.
    pub correspondence: MonotoneBoundaryMap,
    /// `f` on the real line: boundary point to curve point.
    pub boundary_map: MonotoneBoundaryMap,
    /// `log f'` on the grid, when requested.
    pub interior_field: Option<HalfPlaneField>,
    pub normalization: MapNormalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub resolution: usize,
    /// Sup drift of both correspondences over the window under doubling.
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub struct RiemannMaps {
    pub left: RiemannMapPair,
    pub right: RiemannMapPair,
    pub convergence: Option<ConvergenceCertificate>,
}

impl RiemannMapPair {
    fn raw(&self, zeta: Complex64) -> Complex64 {
        zeta * self.normalization.scale + self.normalization.shift
    }

    /// `f(ζ)` and `log f'(ζ)` (sum of principal logarithms).
    pub fn eval(&self, zeta: Complex64) -> (Complex64, Complex64) {
        let (z, l) = self.zipper.eval(self.side, self.raw(zeta));
        (z, l + self.normalization.scale.ln())
    }

    pub fn zipper(&self) -> &Zipper {
        &self.zipper
    }

    pub fn orientation(&self) -> Orientation {
        match self.side {
            Side::Left => Orientation::Upper,
            Side::Right => Orientation::Lower,
        }
    }

    /// Boundary value and log-derivative just inside the domain.
    pub fn eval_boundary(&self, x: f64) -> (Complex64, Complex64) {
        let eps = 1e-9 * (1.0 + x.abs());
        let y = self.orientation().sign() * eps;
        self.eval(Complex64::new(x, y))
    }
}

fn interpolate(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1) - 1;
    let t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    vs[k] * (1.0 - t) + vs[k + 1] * t
}

fn build_side(z: &Arc<Zipper>, side: Side, grid: Option<&Arc<HalfPlaneGrid>>) -> Result<RiemannMapPair> {
    let raw = z.boundary(side);
    let arc = z.arc();
    let (s0, s1) = (arc[z.window().0], arc[z.window().1 - 1]);
    if !(s0 <= 0.0 && s1 >= 1.0) {
        return Err(Error::Range("sampled window must contain [0, 1]".into()));
    }
    let shift = interpolate(arc, raw, 0.0);
    let scale = interpolate(arc, raw, 1.0) - shift;
    if !(scale > 0.0) {
        return Err(Error::Numerical("normalization scale not positive".into()));
    }
    let h: Vec<f64> = raw.iter().map(|v| (v - shift) / scale).collect();
    let correspondence = MonotoneBoundaryMap::real(arc.to_vec(), h.clone())?;
    let boundary_map = MonotoneBoundaryMap::new(h, z.points().to_vec(), false)?;
    let unit_arc = {
        let k0 = arc.partition_point(|&s| s < 0.0);
        let k1 = arc.partition_point(|&s| s <= 1.0);
        let mut acc = 0.0;
        let mut prev = boundary_map.eval(0.0);
        for k in k0..k1 {
            let p = boundary_map.eval(boundary_map.nodes()[k]);
            acc += (p - prev).norm();
            prev = p;
        }
        acc + (boundary_map.eval(1.0) - prev).norm()
    };
    let p = z.pivot();
    let mut pair = RiemannMapPair {
        side,
        zipper: z.clone(),
        correspondence,
        boundary_map,
        interior_field: None,
        normalization: MapNormalization { shift, scale, pivot: [p.re, p.im], unit_arc },
    };
    if let Some(g) = grid {
        let g = match (side, g.orientation()) {
            (Side::Left, Orientation::Upper) | (Side::Right, Orientation::Lower) => g.clone(),
            _ => Arc::new(g.flipped()),
        };
        let field = log_derivative_field(&g, |zeta| pair.eval(zeta).1)?;
        pair.interior_field = Some(field);
    }
    Ok(pair)
}

fn zip(c: &CurveSamples, resolution: usize) -> Result<Arc<Zipper>> {
    let input = zipper::zipper_input(c, resolution)?;
    zipper::check_jordan(&input.points)?;
    let pivot = zipper::choose_pivot(c)?;
    Ok(Arc::new(Zipper::build(input, pivot)?))
}

/// Conformal maps `f: U → Ω` (left of the curve) and `g: L → Ω*` (right),
/// normalized so that `f(0) = z(0)`, `f(1) = z(1)`, `f(∞) = ∞` and likewise
/// for `g`.
pub fn riemann_maps(c: &CurveSamples, opts: &RiemannOptions) -> Result<RiemannMaps> {
    let z = zip(c, opts.resolution)?;
    let left = build_side(&z, Side::Left, opts.field_grid.as_ref())?;
    let right = build_side(&z, Side::Right, opts.field_grid.as_ref())?;
    let convergence = if opts.self_check {
        let fine = zip(c, 2 * opts.resolution)?;
        let fl = build_side(&fine, Side::Left, None)?;
        let fr = build_side(&fine, Side::Right, None)?;
        let (w0, w1) = z.window();
        let mut delta: f64 = 0.0;
        for k in w0..w1 {
            let s = z.arc()[k];
            delta = delta.max((left.correspondence.eval_re(s) - fl.correspondence.eval_re(s)).abs());
            delta = delta.max((right.correspondence.eval_re(s) - fr.correspondence.eval_re(s)).abs());
        }
        Some(ConvergenceCertificate { resolution: opts.resolution, delta })
    } else {
        None
    };
    Ok(RiemannMaps { left, right, convergence })
}

/// `h₁` (or `h₂`), certified increasing and checked against the curve.
pub fn boundary_correspondence(m: &RiemannMapPair, c: &CurveSamples) -> Result<MonotoneBoundaryMap> {
    let h = &m.correspondence;
    if h.values().windows(2).any(|w| !(w[1].re > w[0].re)) {
        return Err(Error::Numerical("boundary correspondence not increasing".into()));
    }
    let arc = c.arc();
    let stride = (arc.len() / 64).max(1);
    let scale = c.diameter().max(1.0);
    for k in (0..arc.len()).step_by(stride) {
        let s = arc[k];
        let (z, _) = m.eval_boundary(h.eval_re(s));
        let gap = (z - c.at(s)).norm();
        if !(gap <= 1e-3 * scale) {
            return Err(Error::Numerical(format!("f(h(s)) misses the curve by {gap:e} at s = {s}")));
        }
    }
    Ok(h.clone())
}

#[derive(Debug, Clone)]
pub struct WeldingRecord {
    /// `h = h₁ ∘ h₂⁻¹`.
    pub h: MonotoneBoundaryMap,
    pub h1: MonotoneBoundaryMap,
    pub h2: MonotoneBoundaryMap,
    /// `log h'` on the arc grid of the curve.
    pub log_h_prime: SampledLineFunction,
}

/// The sewing map `h = f⁻¹ ∘ g` on the real line.
pub fn welding_map(left: &RiemannMapPair, right: &RiemannMapPair, c: &CurveSamples) -> Result<WeldingRecord> {
    if left.side != Side::Left || right.side != Side::Right {
        return Err(Error::Parameter("welding needs the left and right maps".into()));
    }
    let h1 = left.correspondence.clone();
    let h2 = right.correspondence.clone();
    if h1.nodes() != h2.nodes() {
        return Err(Error::Parameter("correspondences sampled at different arcs".into()));
    }
    let a = h1.real_values();
    let b = h2.real_values();
    let h = MonotoneBoundaryMap::real(b.clone(), a.clone())?;
    let mid: Vec<f64> = b.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let slope: Vec<f64> = (0..mid.len())
        .map(|k| ((a[k + 1] - a[k]) / (b[k + 1] - b[k])).ln())
        .collect();
    if slope.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("welding slope not finite".into()));
    }
    let grid = Arc::new(LineGrid::from_nodes(c.arc().to_vec())?);
    let log_h_prime = SampledLineFunction::from_real_fn(grid, None, |x| interpolate(&mid, &slope, x))?;
    Ok(WeldingRecord { h, h1, h2, log_h_prime })
}

/// `log f'` on the interior grid with its Dirichlet seminorm.
pub fn prelog_derivative(m: &RiemannMapPair) -> Result<(HalfPlaneField, NormReport)> {
    let f = m
        .interior_field
        .clone()
        .ok_or_else(|| Error::Parameter("map carries no interior field".into()))?;
    let d = holomorphic_derivative(&f)?;
    Ok((f, dirichlet_seminorm(&d)))
}
