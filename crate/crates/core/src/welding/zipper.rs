//! Geodesic zipper for Jordan curves through ∞ after a Möbius transfer.

use crate::curve::CurveSamples;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Smallest admissible imaginary part of a zipper tip, relative to its size.
const TIP_ANGLE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Domain to the left of the curve, mapped from the upper half plane.
    Left,
    /// Domain to the right, mapped from the lower half plane.
    Right,
}

/// Boundary points fed to the zipper: arc tags and positions.
#[derive(Debug, Clone)]
pub(crate) struct ZipperInput {
    pub arc: Vec<f64>,
    pub points: Vec<Complex64>,
    /// Range of indices belonging to the sampled window.
    pub window: (usize, usize),
}

/// Resample a curve with `resolution` cells over its arc range, with
/// `resolution / 2` points on each tail ray, uniform in the reciprocal
/// distance.
pub(crate) fn zipper_input(c: &CurveSamples, resolution: usize) -> Result<ZipperInput> {
    if resolution < 16 {
        return Err(Error::Parameter(format!("zipper resolution {resolution} below 16")));
    }
    let arc = c.arc();
    let (s0, s1) = (arc[0], arc[arc.len() - 1]);
    let half = 0.5 * (s1 - s0);
    let tail = (resolution / 2).max(2);
    let (dl, dr) = c.tail_directions();
    let (zl, zr) = (c.points()[0], c.points()[c.len() - 1]);
    let mut s = Vec::with_capacity(resolution + 2 * tail);
    let mut z = Vec::with_capacity(resolution + 2 * tail);
    for j in 1..tail {
        let t = half * (tail as f64 / j as f64 - 1.0);
        s.push(s0 - t);
        z.push(zl - dl * t);
    }
    let w0 = s.len();
    for k in 0..=resolution {
        let v = s0 + (s1 - s0) * k as f64 / resolution as f64;
        s.push(v);
        z.push(c.at(v));
    }
    let w1 = s.len();
    for j in (1..tail).rev() {
        let t = half * (tail as f64 / j as f64 - 1.0);
        s.push(s1 + t);
        z.push(zr + dr * t);
    }
    Ok(ZipperInput { arc: s, points: z, window: (w0, w1) })
}

fn ray_distance(p: Complex64, start: Complex64, dir: Complex64) -> f64 {
    let t = ((p - start) * dir.conj()).re.max(0.0);
    (p - (start + dir * t)).norm()
}

/// Pivot of the Möbius transfer, placed at distance `2 + diam` from the
/// origin in the first direction that keeps it away from the curve.
pub(crate) fn choose_pivot(c: &CurveSamples) -> Result<Complex64> {
    let r = 2.0 + c.diameter();
    let (dl, dr) = c.tail_directions();
    let (zl, zr) = (c.points()[0], c.points()[c.len() - 1]);
    let angles = [0.5, -0.5, 0.25, 0.75, -0.25, -0.75, 0.0, 1.0];
    for a in angles {
        let p = Complex64::from_polar(r, a * PI);
        let window = c.points().iter().map(|z| (z - p).norm()).fold(f64::INFINITY, f64::min);
        let d = window.min(ray_distance(p, zl, -dl)).min(ray_distance(p, zr, dr));
        if d >= 1.0 {
            return Ok(p);
        }
    }
    Err(Error::Degenerate("no transfer pivot keeps distance 1 from the curve".into()))
}

/// Reject curves whose chords cross.
pub(crate) fn check_jordan(points: &[Complex64]) -> Result<()> {
    let n = points.len();
    if n < 3 {
        return Ok(());
    }
    let mut segs: Vec<(f64, f64, usize)> = (0..n - 1)
        .map(|i| {
            let (a, b) = (points[i], points[i + 1]);
            (a.re.min(b.re), a.re.max(b.re), i)
        })
        .collect();
    segs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let cross = |a: Complex64, b: Complex64, c: Complex64, d: Complex64| {
        let o = |p: Complex64, q: Complex64, r: Complex64| ((q - p).conj() * (r - p)).im;
        let (d1, d2) = (o(a, b, c), o(a, b, d));
        let (d3, d4) = (o(c, d, a), o(c, d, b));
        d1 * d2 < 0.0 && d3 * d4 < 0.0
    };
    for (idx, &(_, xmax, i)) in segs.iter().enumerate() {
        for &(xmin2, _, j) in &segs[idx + 1..] {
            if xmin2 > xmax {
                break;
            }
            if i.abs_diff(j) <= 1 {
                continue;
            }
            if cross(points[i], points[i + 1], points[j], points[j + 1]) {
                return Err(Error::NotJordan(format!("chords {i} and {j} intersect")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Slit {
    /// `Re a / |a|²`, the reciprocal of the second foot of the geodesic.
    inv_foot: f64,
    /// Height of the straightened slit.
    height: f64,
}

fn sqrt_upper(v: Complex64) -> Complex64 {
    let s = v.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

impl Slit {
    fn forward(&self, z: Complex64) -> Complex64 {
        let w = z / (1.0 - z * self.inv_foot);
        sqrt_upper(w * w + self.height * self.height)
    }

    fn forward_real(&self, x: f64) -> f64 {
        let w = x / (1.0 - x * self.inv_foot);
        w.signum() * (w * w + self.height * self.height).sqrt()
    }

    /// Inverse and its derivative.
    fn inverse(&self, zeta: Complex64) -> (Complex64, Complex64) {
        let w = sqrt_upper(zeta * zeta - self.height * self.height);
        let den = 1.0 + w * self.inv_foot;
        (w / den, zeta / w / (den * den))
    }
}

/// Conformal map of both sides of a curve through ∞ onto the half planes.
#[derive(Debug, Clone)]
pub struct Zipper {
    pivot: Complex64,
    first: Complex64,
    slits: Vec<Slit>,
    inv_end: f64,
    arc: Vec<f64>,
    points: Vec<Complex64>,
    left: Vec<f64>,
    right: Vec<f64>,
    window: (usize, usize),
}

impl Zipper {
    pub(crate) fn build(input: ZipperInput, pivot: Complex64) -> Result<Zipper> {
        let n = input.points.len();
        if n < 4 {
            return Err(Error::Parameter("zipper needs at least four points".into()));
        }
        let t: Vec<Complex64> = input.points.iter().map(|z| 1.0 / (z - pivot)).collect();
        let first = t[0];
        // first map: i sqrt((z - z1)/(z - z0)) with z0 = 0 the image of ∞
        let mut zeta: Vec<Complex64> = t.iter().map(|&z| Complex64::i() * ((z - first) / z).sqrt()).collect();
        zeta[0] = Complex64::new(0.0, 0.0);
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        let mut end: Option<f64> = None;
        let mut slits = Vec::with_capacity(n - 1);
        for k in 1..n {
            let a = zeta[k];
            let m2 = a.norm_sqr();
            if !(a.im > TIP_ANGLE_FLOOR * m2.sqrt()) || !a.im.is_finite() {
                return Err(Error::Resolution(format!(
                    "zipper tip {k} left the upper half plane (Im = {:e}); refine the sampling",
                    a.im
                )));
            }
            let slit = Slit { inv_foot: a.re / m2, height: m2 / a.im };
            for j in 0..k - 1 {
                left[j] = slit.forward_real(left[j]);
                right[j] = slit.forward_real(right[j]);
            }
            left[k - 1] = -slit.height;
            right[k - 1] = slit.height;
            end = Some(match end {
                None => {
                    if slit.inv_foot == 0.0 {
                        return Err(Error::Resolution("zipper end point stays at infinity".into()));
                    }
                    let w = -1.0 / slit.inv_foot;
                    w.signum() * (w * w + slit.height * slit.height).sqrt()
                }
                Some(e) => slit.forward_real(e),
            });
            if end.map_or(false, |e| e.is_infinite()) {
                return Err(Error::Numerical("zipper end point overflow".into()));
            }
            crate::par::for_each_mut(&mut zeta[k + 1..], |z| *z = slit.forward(*z));
            zeta[k] = Complex64::new(0.0, 0.0);
            slits.push(slit);
        }
        let e = end.expect("at least one slit");
        let inv_end = 1.0 / e;
        let fin = |x: f64| {
            let m = x / (1.0 - x * inv_end);
            -m * m
        };
        for j in 0..n {
            left[j] = fin(left[j]);
            right[j] = fin(right[j]);
        }
        let z = Zipper {
            pivot,
            first,
            slits,
            inv_end,
            arc: input.arc,
            points: input.points,
            left,
            right,
            window: input.window,
        };
        z.check_monotone()?;
        Ok(z)
    }

    fn check_monotone(&self) -> Result<()> {
        for (name, v) in [("left", &self.left), ("right", &self.right)] {
            if let Some(k) = v.windows(2).position(|w| !(w[1] > w[0])) {
                return Err(Error::Numerical(format!(
                    "{name} boundary correspondence not increasing at sample {k}"
                )));
            }
        }
        Ok(())
    }

    pub fn pivot(&self) -> Complex64 {
        self.pivot
    }

    pub fn arc(&self) -> &[f64] {
        &self.arc
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn window(&self) -> (usize, usize) {
        self.window
    }

    /// Raw boundary images of the curve samples.
    pub fn boundary(&self, side: Side) -> &[f64] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Raw inverse map and its log-derivative at `zeta` in the closed half
    /// plane of `side`. The logarithm is the sum of principal logarithms of
    /// the factors.
    pub fn eval(&self, side: Side, zeta: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let mut logd = Complex64::new(0.0, 0.0);
        let m = match side {
            Side::Left => i * zeta.sqrt(),
            Side::Right => (-zeta).sqrt(),
        };
        logd += (-0.5 / m).ln();
        let den = 1.0 + m * self.inv_end;
        let mut z = m / den;
        logd -= 2.0 * den.ln();
        for s in self.slits.iter().rev() {
            let (w, d) = s.inverse(z);
            logd += d.ln();
            z = w;
        }
        // first map: z = z1 / (1 - q), q = -ζ²
        let q = -z * z;
        let one_q = 1.0 - q;
        let t = self.first / one_q;
        logd += (self.first / (one_q * one_q) * (-2.0 * z)).ln();
        let u = 1.0 / t;
        logd += (-(u * u)).ln();
        (self.pivot + u, logd)
    }
}
