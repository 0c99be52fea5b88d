//! Curves from tangent angles and back: synthesis, unwrapping, chord-arc
//! constants, normalization and reflection.

use crate::error::{Error, Result};
use crate::numerics::{cumulative_from, LineGrid, MonotoneBoundaryMap, SampledLineFunction};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Allowed shortfall of chord over arc for unit-speed samples.
pub const UNIT_SPEED_EPS: f64 = 1e-3;
/// Allowed excess of chord over arc (rounding and rescaling).
pub const UNIT_SPEED_SLACK: f64 = 1e-6;
pub const DEFAULT_PAIR_BUDGET: usize = 2_000_000;
pub const DEFAULT_PAIR_SEED: u64 = 0x5eed_c0de;
pub const MIN_CHORD_ARC_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub translation: Complex64,
    /// Angle of the rotation applied after translating.
    pub rotation: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    points: Vec<Complex64>,
    arc: Vec<f64>,
    normalization: Option<Normalization>,
}

impl CurveSamples {
    pub fn new(points: Vec<Complex64>, arc: Vec<f64>) -> Result<Self> {
        if points.len() != arc.len() || points.len() < 2 {
            return Err(Error::Invariant("curve needs matching points and arc tags".into()));
        }
        if arc.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invariant("arc tags not strictly increasing".into()));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invariant("non-finite curve point".into()));
        }
        if let Some(k) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::Degenerate(format!("consecutive points coincide at sample {k}")));
        }
        Ok(CurveSamples { points, arc, normalization: None })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn arc(&self) -> &[f64] {
        &self.arc
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization.is_some()
    }

    pub fn normalization(&self) -> Option<Normalization> {
        self.normalization
    }

    /// Range of chord/arc ratios over consecutive samples.
    pub fn speed_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for k in 0..self.len() - 1 {
            let r = (self.points[k + 1] - self.points[k]).norm() / (self.arc[k + 1] - self.arc[k]);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        (lo, hi)
    }

    pub fn is_unit_speed(&self) -> bool {
        let (lo, hi) = self.speed_range();
        lo >= 1.0 - UNIT_SPEED_EPS && hi <= 1.0 + UNIT_SPEED_SLACK
    }

    /// Point at arc parameter `s`, linear between samples and along the end
    /// chords beyond them.
    pub fn at(&self, s: f64) -> Complex64 {
        let n = self.arc.len();
        let k = self.arc.partition_point(|&v| v <= s).clamp(1, n - 1) - 1;
        let t = (s - self.arc[k]) / (self.arc[k + 1] - self.arc[k]);
        self.points[k] * (1.0 - t) + self.points[k + 1] * t
    }

    /// Unit directions of the two end rays.
    pub fn tail_directions(&self) -> (Complex64, Complex64) {
        let n = self.len();
        let l = self.points[1] - self.points[0];
        let r = self.points[n - 1] - self.points[n - 2];
        (l / l.norm(), r / r.norm())
    }

    pub fn as_map(&self) -> Result<MonotoneBoundaryMap> {
        MonotoneBoundaryMap::new(self.arc.clone(), self.points.clone(), false)
    }

    pub fn diameter(&self) -> f64 {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in &self.points {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
        ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentAngle {
    pub b: SampledLineFunction,
    pub mean_removed: bool,
}

impl TangentAngle {
    pub fn new(b: SampledLineFunction) -> Result<Self> {
        if !b.is_real() {
            return Err(Error::Invariant("tangent angle must be real".into()));
        }
        if b.support().is_none() {
            return Err(Error::Invariant("tangent angle needs compact support of variation".into()));
        }
        Ok(TangentAngle { b, mean_removed: false })
    }

    pub fn grid(&self) -> &Arc<LineGrid> {
        self.b.grid_arc()
    }
}

/// `γ_u(x) = ∫_0^x e^{iu}` by cumulative trapezoid. For real `u` the curve
/// is unit speed with arc tags equal to the grid nodes.
pub fn gamma_u(u: &SampledLineFunction) -> Result<(MonotoneBoundaryMap, CurveSamples)> {
    let x = u.nodes();
    let speed: Vec<Complex64> = u.values().iter().map(|v| (Complex64::i() * v).exp()).collect();
    let k0 = x.partition_point(|&v| v <= 0.0).max(1) - 1;
    let mut z = cumulative_from(x, &speed, k0);
    if x[k0] != 0.0 {
        // shift the origin to x = 0 inside cell k0
        let t = (0.0 - x[k0]) / (x[k0 + 1] - x[k0]);
        let at0 = speed[k0] * (1.0 - t) + speed[k0 + 1] * t;
        let offset = (speed[k0] + at0) * (0.5 * (0.0 - x[k0]));
        for v in z.iter_mut() {
            *v -= offset;
        }
    }
    let map = MonotoneBoundaryMap::new(x.to_vec(), z.clone(), false)?;
    let curve = CurveSamples::new(z, x.to_vec())?;
    Ok((map, curve))
}

/// Increment wrapped into (-π, π].
pub fn wrap_increment(d: f64) -> f64 {
    let w = (d + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        PI
    } else {
        w
    }
}

/// Unwrapped angles of successive chords (cell values).
pub fn chord_angles(points: &[Complex64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(points.len().saturating_sub(1));
    let mut prev: Option<f64> = None;
    for (k, w) in points.windows(2).enumerate() {
        let d = w[1] - w[0];
        if d.norm() == 0.0 {
            return Err(Error::Degenerate(format!("duplicate consecutive points at sample {k}")));
        }
        let raw = d.arg();
        let a = match prev {
            None => raw,
            Some(p) => p + wrap_increment(raw - p),
        };
        out.push(a);
        prev = Some(a);
    }
    Ok(out)
}

/// Relative tolerance for detecting the constant tails of an angle.
const ANGLE_TAIL_TOL: f64 = 1e-9;

/// Tangent angle from chord directions, moved from cell midpoints to nodes.
/// The arc tags must form a symmetric grid.
pub fn tangent_angle_from_curve(c: &CurveSamples, remove_mean: bool) -> Result<TangentAngle> {
    let cells = chord_angles(c.points())?;
    let n = c.len();
    let mut nodes = vec![0.0; n];
    nodes[0] = cells[0];
    nodes[n - 1] = cells[n - 2];
    for k in 1..n - 1 {
        nodes[k] = 0.5 * (cells[k - 1] + cells[k]);
    }
    let grid = Arc::new(LineGrid::from_nodes(c.arc().to_vec())?);
    let values = nodes.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let mut b = SampledLineFunction::with_detected_support(grid, values, ANGLE_TAIL_TOL)?;
    if remove_mean {
        b = crate::spaces::remove_mean(&b)?;
    }
    Ok(TangentAngle { b, mean_removed: remove_mean })
}

/// `max |s1-s2| / |z1-z2| - 1` over sampled pairs: every pair when the
/// count fits the budget, else a seeded sample stratified by dyadic index
/// separation.
pub fn chord_arc_constant(c: &CurveSamples, pair_budget: usize, seed: u64) -> Result<f64> {
    let n = c.len();
    if n < MIN_CHORD_ARC_SAMPLES {
        return Err(Error::Parameter(format!(
            "need at least {MIN_CHORD_ARC_SAMPLES} samples, got {n}"
        )));
    }
    let z = c.points();
    let s = c.arc();
    let ratio = |i: usize, j: usize| -> f64 {
        let d = (z[j] - z[i]).norm();
        if d == 0.0 {
            f64::INFINITY
        } else {
            (s[j] - s[i]).abs() / d
        }
    };
    let total = n * (n - 1) / 2;
    let worst = if total <= pair_budget {
        crate::par::max_range(n - 1, |i| (i + 1..n).map(|j| ratio(i, j)).fold(0.0, f64::max))
    } else {
        let bands = usize::BITS as usize - (n - 1).leading_zeros() as usize;
        let quota = (pair_budget / bands).max(1);
        let mut pairs = Vec::with_capacity(pair_budget);
        for m in 0..bands {
            let lo = 1usize << m;
            let hi = ((1usize << (m + 1)) - 1).min(n - 1);
            let count: usize = (lo..=hi).map(|d| n - d).sum();
            if count <= quota {
                for d in lo..=hi {
                    for i in 0..n - d {
                        pairs.push((i, i + d));
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                for _ in 0..quota {
                    let d = rng.gen_range(lo..=hi);
                    let i = rng.gen_range(0..n - d);
                    pairs.push((i, i + d));
                }
            }
        }
        crate::par::max_range(pairs.len(), |p| ratio(pairs[p].0, pairs[p].1))
    };
    if !worst.is_finite() {
        return Err(Error::Degenerate("coincident curve points".into()));
    }
    Ok((worst - 1.0).max(0.0))
}

/// Translate, rotate and scale so that `z(0) = 0`, `z(1) > 0` and the
/// length between `s = 0` and `s = 1` is one, or the peak chord/arc ratio
/// is one when that is larger.
pub fn normalize_curve(c: &CurveSamples) -> Result<CurveSamples> {
    let s = c.arc();
    let n = s.len();
    if !(s[0] <= 0.0 && s[n - 1] >= 1.0) {
        return Err(Error::Range(format!("arc range [{}, {}] misses [0, 1]", s[0], s[n - 1])));
    }
    let z0 = c.at(0.0);
    let z1 = c.at(1.0);
    // the polygon undershoots arc length; capping by peak speed keeps chords within arcs
    let length = polygon_length(c, z0, z1).max(c.speed_range().1);
    let d = z1 - z0;
    if d.norm() == 0.0 || length == 0.0 {
        return Err(Error::Degenerate("z(0) and z(1) coincide".into()));
    }
    let rot = d.norm() / d;
    let factor = rot / length;
    let points = c.points().iter().map(|&z| (z - z0) * factor).collect();
    let mut out = CurveSamples::new(points, s.to_vec())?;
    out.normalization = Some(Normalization { translation: z0, rotation: rot.arg(), scale: 1.0 / length });
    Ok(out)
}

fn polygon_length(c: &CurveSamples, z0: Complex64, z1: Complex64) -> f64 {
    let mut length = 0.0;
    let mut prev = z0;
    for (z, s) in c.points().iter().zip(c.arc()) {
        if *s > 0.0 && *s < 1.0 {
            length += (z - prev).norm();
            prev = *z;
        }
    }
    length + (z1 - prev).norm()
}

/// Pointwise conjugation; arc tags are kept.
pub fn reflect_j(c: &CurveSamples) -> CurveSamples {
    CurveSamples {
        points: c.points().iter().map(|z| z.conj()).collect(),
        arc: c.arc().to_vec(),
        normalization: c.normalization.map(|n| Normalization {
            translation: n.translation.conj(),
            rotation: -n.rotation,
            scale: n.scale,
        }),
    }
}
