use crate::error::{Error, Result};
use crate::extension::{ExtensionField, ExtensionSource};
use crate::numerics::{HalfPlaneField, HalfPlaneGrid, MonotoneBoundaryMap};
use crate::spaces::BeltramiField;
use num_complex::Complex64;
use std::sync::Arc;

/// Smallest admissible denominator in the composition formula.
pub const COMPOSITION_FLOOR: f64 = 1e-6;

/// Antiderivative of the piecewise linear interpolant of a real map, with
/// affine extension beyond the end nodes.
struct Primitive<'a> {
    h: &'a MonotoneBoundaryMap,
    cumulative: Vec<f64>,
}

impl<'a> Primitive<'a> {
    fn new(h: &'a MonotoneBoundaryMap) -> Self {
        let x = h.nodes();
        let v = h.values();
        let mut cumulative = vec![0.0; x.len()];
        for k in 1..x.len() {
            cumulative[k] = cumulative[k - 1] + 0.5 * (v[k].re + v[k - 1].re) * (x[k] - x[k - 1]);
        }
        Primitive { h, cumulative }
    }

    fn at(&self, t: f64) -> f64 {
        let x = self.h.nodes();
        let n = x.len();
        let k = x.partition_point(|&v| v <= t).clamp(1, n - 1) - 1;
        let k = if t > x[n - 1] { n - 1 } else { k };
        let base = self.h.values()[k].re;
        let d = t - x[k];
        let slope = self.h.slope(t).re;
        self.cumulative[k] + base * d + 0.5 * slope * d * d
    }
}

/// Average-based extension `F = (α+β)/2 + i(α-β)` of a real increasing map,
/// with `α`, `β` the means of `h` over `[x, x+y]` and `[x-y, x]`; the lower
/// half plane is filled by reflection.
pub fn beurling_ahlfors_extension(h: &MonotoneBoundaryMap, grid: &Arc<HalfPlaneGrid>) -> Result<ExtensionField> {
    if !h.is_monotone_real() {
        return Err(Error::Parameter("extension needs a real increasing map".into()));
    }
    let prim = Primitive::new(h);
    let cols = grid.cols();
    let xs = grid.x().nodes();
    let heights = grid.heights();
    let sigma = grid.orientation().sign();
    let i = Complex64::i();
    let nodes = crate::par::map_range(grid.len(), |idx| {
        let (x, y) = (xs[idx % cols], heights[idx / cols]);
        let (hp, h0, hm) = (h.eval_re(x + y), h.eval_re(x), h.eval_re(x - y));
        let p0 = prim.at(x);
        let a = (prim.at(x + y) - p0) / y;
        let b = (p0 - prim.at(x - y)) / y;
        let (ax, ay) = ((hp - h0) / y, (hp - a) / y);
        let (bx, by) = ((h0 - hm) / y, (hm - b) / y);
        let f = 0.5 * (a + b) + i * (a - b);
        let fx = 0.5 * (ax + bx) + i * (ax - bx);
        let fy = 0.5 * (ay + by) + i * (ay - by);
        let (f, fx, fy) = if sigma > 0.0 { (f, fx, fy) } else { (f.conj(), fx.conj(), -fy.conj()) };
        (f, 0.5 * (fx - i * fy), 0.5 * (fx + i * fy))
    });
    let mut rho = Vec::with_capacity(nodes.len());
    let mut d = Vec::with_capacity(nodes.len());
    let mut db = Vec::with_capacity(nodes.len());
    for (a, b, c) in nodes {
        rho.push(a);
        d.push(b);
        db.push(c);
    }
    Ok(ExtensionField {
        rho: HalfPlaneField::new(grid.clone(), rho)?,
        boundary: h.clone(),
        d_rho: HalfPlaneField::new(grid.clone(), d)?,
        d_bar_rho: HalfPlaneField::new(grid.clone(), db)?,
        source: ExtensionSource::BeurlingAhlfors,
        certificate: None,
    })
}

/// Bilinear interpolation on a half-plane field; points outside the grid
/// are clamped to the nearest boundary node. Returns the value and whether
/// clamping happened.
pub fn interpolate_field(f: &HalfPlaneField, z: Complex64) -> (Complex64, bool) {
    let g = f.grid();
    let xs = g.x().nodes();
    let hs = g.heights();
    let (x, y) = (z.re, z.im.abs());
    let mut clamped = false;
    let xc = if x < xs[0] || x > xs[xs.len() - 1] {
        clamped = true;
        x.clamp(xs[0], xs[xs.len() - 1])
    } else {
        x
    };
    let (ylo, yhi) = (hs[hs.len() - 1], hs[0]);
    let yc = if y < ylo || y > yhi {
        clamped = true;
        y.clamp(ylo, yhi)
    } else {
        y
    };
    if g.orientation().sign() * z.im < 0.0 {
        clamped = true;
    }
    let (k, t) = g.x().locate(xc);
    let k = k.min(xs.len() - 2);
    // heights descend with the row index
    let rows = hs.len();
    let j = if rows == 1 { 0 } else { hs.partition_point(|&h| h > yc).clamp(1, rows - 1) - 1 };
    let (r0, r1, u) = if rows == 1 { (0, 0, 0.0) } else { (j, j + 1, (hs[j] - yc) / (hs[j] - hs[j + 1])) };
    let v = |r: usize| f.at(r, k) * (1.0 - t) + f.at(r, k + 1) * t;
    (v(r0) * (1.0 - u) + v(r1) * u, clamped)
}

#[derive(Debug, Clone)]
pub struct Composition {
    pub mu: BeltramiField,
    /// Nodes whose image left the grid of `μ_F`.
    pub clamped: usize,
}

/// Beltrami coefficient of `F ∘ H` from `μ_F` and the derivatives of `H`.
pub fn beltrami_compose(mu_f: &BeltramiField, h: &ExtensionField) -> Result<Composition> {
    let grid = h.grid().clone();
    let n = grid.len();
    let out = crate::par::try_map_range(n, |i| {
        let d = h.d_rho.values()[i];
        let db = h.d_bar_rho.values()[i];
        if d.norm() < COMPOSITION_FLOOR {
            return Err(Error::DegenerateJacobian(d.norm()));
        }
        let mu_h = db / d;
        let (m, clamped) = interpolate_field(mu_f.field(), h.rho.values()[i]);
        let theta = d.conj() / d;
        let den = 1.0 + mu_h.conj() * m * theta;
        if den.norm() < COMPOSITION_FLOOR {
            return Err(Error::Composition(den.norm()));
        }
        Ok(((mu_h + m * theta) / den, clamped))
    })?;
    let clamped = out.iter().filter(|v| v.1).count();
    let field = HalfPlaneField::new(grid, out.into_iter().map(|v| v.0).collect())?;
    Ok(Composition { mu: BeltramiField::new(field)?, clamped })
}
