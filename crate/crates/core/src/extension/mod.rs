//! Mollified extensions of boundary data into the half planes.

mod convolve;
mod kernels;

pub use convolve::{convolve_scaled, subnode_count, LineData, MIN_SUBNODES};
pub use kernels::{kernel_eval, phi, phi_constant, phi_prime, phi_second, psi_half_signed, KernelSpec};

use crate::curve::{gamma_u, TangentAngle};
use crate::error::{Error, Result};
use crate::numerics::{HalfPlaneField, HalfPlaneGrid, MonotoneBoundaryMap, SampledLineFunction};
use crate::spaces::BeltramiField;
use convolve::Window;
use kernels::Profile;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Lower bound for `|φ_y * z_b'|`.
pub const RY_DENOMINATOR_FLOOR: f64 = 0.1;
/// Smallest admissible `|∂ρ|`.
pub const JACOBIAN_FLOOR: f64 = 1e-6;
/// Accepted range for bi-Lipschitz edge ratios.
pub const BILIPSCHITZ_RANGE: (f64, f64) = (1.0 / 3.0, 3.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionSource {
    Base,
    General,
    BeurlingAhlfors,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiLipschitzCertificate {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub min_jacobian: f64,
    pub max_dilatation: f64,
}

#[derive(Debug, Clone)]
pub struct ExtensionField {
    pub rho: HalfPlaneField,
    pub boundary: MonotoneBoundaryMap,
    pub d_rho: HalfPlaneField,
    pub d_bar_rho: HalfPlaneField,
    pub source: ExtensionSource,
    pub certificate: Option<BiLipschitzCertificate>,
}

impl ExtensionField {
    pub fn grid(&self) -> &Arc<HalfPlaneGrid> {
        self.rho.grid_arc()
    }

    pub fn min_d_rho(&self) -> f64 {
        self.d_rho.values().iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Values on the boundary below each column.
    pub fn boundary_row(&self) -> Vec<Complex64> {
        self.grid().x().nodes().iter().map(|&x| self.boundary.eval(x)).collect()
    }
}

fn wirtinger(rx: Complex64, ry: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    (0.5 * (rx - i * ry), 0.5 * (rx + i * ry))
}

struct NodeValue {
    rho: Complex64,
    d: Complex64,
    d_bar: Complex64,
}

fn assemble<F>(grid: &Arc<HalfPlaneGrid>, node: F) -> Result<[HalfPlaneField; 3]>
where
    F: Fn(usize, usize) -> Result<NodeValue> + Sync,
{
    let cols = grid.cols();
    let vals = crate::par::try_map_range(grid.len(), |i| node(i / cols, i % cols))?;
    let mut rho = Vec::with_capacity(vals.len());
    let mut d = Vec::with_capacity(vals.len());
    let mut db = Vec::with_capacity(vals.len());
    for v in vals {
        rho.push(v.rho);
        d.push(v.d);
        db.push(v.d_bar);
    }
    Ok([
        HalfPlaneField::new(grid.clone(), rho)?,
        HalfPlaneField::new(grid.clone(), d)?,
        HalfPlaneField::new(grid.clone(), db)?,
    ])
}

fn exp_i(u: &SampledLineFunction) -> Result<SampledLineFunction> {
    u.map(|v| (Complex64::i() * v).exp())
}

fn resolution(u: &SampledLineFunction) -> f64 {
    u.grid().min_spacing()
}

/// `ρ = φ_y * γ_u - i sgn(y) ψ_y * γ_u` with `ψ = -φ'`.
pub fn extension_base(u: &SampledLineFunction, grid: &Arc<HalfPlaneGrid>) -> Result<ExtensionField> {
    let (gamma, _) = gamma_u(u)?;
    let speed = exp_i(u)?;
    let sigma = grid.orientation().sign();
    let h = resolution(u);
    let on_gamma = [Profile::Phi, Profile::PsiOdd];
    let on_speed = [Profile::Phi, Profile::PsiOdd, Profile::Alpha, Profile::NegXPsi];
    let windows: Vec<(Window, Window)> = grid
        .heights()
        .iter()
        .map(|&eta| (Window::new(eta, h, &on_gamma), Window::new(eta, h, &on_speed)))
        .collect();
    let xs = grid.x().nodes();
    let i = Complex64::i();
    let [rho, d_rho, d_bar_rho] = assemble(grid, |j, k| {
        let x = xs[k];
        let mut a = [Complex64::new(0.0, 0.0); 2];
        let mut b = [Complex64::new(0.0, 0.0); 4];
        windows[j].0.apply(&gamma, x, &mut a)?;
        windows[j].1.apply(&speed, x, &mut b)?;
        let rho = a[0] - i * sigma * a[1];
        let rx = b[0] - i * sigma * b[1];
        let ry = sigma * b[2] - i * b[3];
        let (d, d_bar) = wirtinger(rx, ry);
        Ok(NodeValue { rho, d, d_bar })
    })?;
    Ok(ExtensionField {
        rho,
        boundary: gamma,
        d_rho,
        d_bar_rho,
        source: ExtensionSource::Base,
        certificate: None,
    })
}

/// Bi-Lipschitz edge ratios and Jacobian bounds of an extension.
pub fn certify_bilipschitz(e: &ExtensionField) -> BiLipschitzCertificate {
    let grid = e.grid();
    let xs = grid.x().nodes();
    let rows = grid.rows();
    let cols = grid.cols();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut push = |r: f64| {
        lo = lo.min(r);
        hi = hi.max(r);
    };
    for j in 0..rows {
        let row = e.rho.row(j);
        for k in 0..cols - 1 {
            push((row[k + 1] - row[k]).norm() / (xs[k + 1] - xs[k]));
        }
        let below: Vec<Complex64> = if j + 1 < rows {
            e.rho.row(j + 1).to_vec()
        } else {
            e.boundary_row()
        };
        let dy = grid.heights()[j] - if j + 1 < rows { grid.heights()[j + 1] } else { 0.0 };
        for k in 0..cols {
            push((row[k] - below[k]).norm() / dy);
        }
    }
    let mut min_jac = f64::INFINITY;
    let mut max_dil: f64 = 0.0;
    for (d, db) in e.d_rho.values().iter().zip(e.d_bar_rho.values()) {
        min_jac = min_jac.min(d.norm_sqr() - db.norm_sqr());
        max_dil = max_dil.max(db.norm() / d.norm());
    }
    BiLipschitzCertificate { min_ratio: lo, max_ratio: hi, min_jacobian: min_jac, max_dilatation: max_dil }
}

/// Extension of the arc-length parametrization `z_b`, certified bi-Lipschitz
/// on the grid.
pub fn tau_bilipschitz(b: &TangentAngle, grid: &Arc<HalfPlaneGrid>) -> Result<ExtensionField> {
    let mut e = extension_base(&b.b, grid)?;
    let cert = certify_bilipschitz(&e);
    let (lo, hi) = BILIPSCHITZ_RANGE;
    if !(cert.min_ratio >= lo && cert.max_ratio <= hi && cert.min_jacobian > 0.0 && cert.max_dilatation < 1.0) {
        return Err(Error::Certificate {
            min_ratio: cert.min_ratio,
            max_ratio: cert.max_ratio,
            min_jacobian: cert.min_jacobian,
        });
    }
    e.certificate = Some(cert);
    Ok(e)
}

/// `R_y(w)(x) = φ_y * (z_b' w) / φ_y * z_b'`.
pub fn ry_operator(b: &TangentAngle, y: f64, w: &SampledLineFunction, x: f64) -> Result<Complex64> {
    let zb = exp_i(&b.b)?;
    let den = convolve_scaled(KernelSpec::Phi, y, &zb, x)?;
    if den.norm() < RY_DENOMINATOR_FLOOR {
        return Err(Error::KernelScale { x, y, denominator: den.norm(), floor: RY_DENOMINATOR_FLOOR });
    }
    let num = convolve_scaled(KernelSpec::Phi, y, &Product { a: &zb, b: w }, x)?;
    Ok(num / den)
}

struct Product<'a> {
    a: &'a SampledLineFunction,
    b: &'a SampledLineFunction,
}

impl LineData for Product<'_> {
    fn value_at(&self, x: f64) -> Complex64 {
        self.a.value_at(x) * self.b.value_at(x)
    }
    fn covers(&self, a: f64, b: f64) -> bool {
        self.a.covers(a, b) && self.b.covers(a, b)
    }
    fn resolution(&self) -> f64 {
        resolution(self.a).min(resolution(self.b))
    }
}

/// `ρ = φ_y * ω_u + R_y(e^{iu}) (τ - φ_y * z_b)` where `ω_u = γ_{b+u}`.
pub fn extension_general(
    b: &TangentAngle,
    u: &SampledLineFunction,
    tau: &ExtensionField,
    grid: &Arc<HalfPlaneGrid>,
) -> Result<ExtensionField> {
    if tau.grid().as_ref() != grid.as_ref() {
        return Err(Error::Parameter("τ lives on a different grid".into()));
    }
    if tau.certificate.is_none() {
        return Err(Error::Parameter("τ must be certified".into()));
    }
    if b.grid().nodes() != u.nodes() {
        return Err(Error::Parameter("b and u must share a line grid".into()));
    }
    let total = b.b.combine(Complex64::new(1.0, 0.0), u, Complex64::new(1.0, 0.0))?;
    let (omega, _) = gamma_u(&total)?;
    let (zb, _) = gamma_u(&b.b)?;
    let zb_speed = exp_i(&b.b)?;
    let omega_speed = exp_i(&total)?;
    let sigma = grid.orientation().sign();
    let h = resolution(u).min(resolution(&b.b));
    let on_speed = [Profile::Phi, Profile::PhiPrime, Profile::XPhiPrime, Profile::Alpha];
    let on_map = [Profile::Phi];
    let windows: Vec<(Window, Window)> = grid
        .heights()
        .iter()
        .map(|&eta| (Window::new(eta, h, &on_speed), Window::new(eta, h, &on_map)))
        .collect();
    let xs = grid.x().nodes();
    let heights = grid.heights();
    let cols = grid.cols();
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let [rho, d_rho, d_bar_rho] = assemble(grid, |j, k| {
        let x = xs[k];
        let eta = heights[j];
        let mut n = [zero; 4];
        let mut d = [zero; 4];
        let mut a = [zero; 1];
        let mut bb = [zero; 1];
        windows[j].0.apply(&omega_speed, x, &mut n)?;
        windows[j].0.apply(&zb_speed, x, &mut d)?;
        windows[j].1.apply(&omega, x, &mut a)?;
        windows[j].1.apply(&zb, x, &mut bb)?;
        if d[0].norm() < RY_DENOMINATOR_FLOOR {
            return Err(Error::KernelScale {
                x,
                y: sigma * eta,
                denominator: d[0].norm(),
                floor: RY_DENOMINATOR_FLOOR,
            });
        }
        // smoothed terms and their x and scale derivatives
        let (nv, nx, ne) = (n[0], n[1] / eta, -n[2] / eta);
        let (dv, dx, de) = (d[0], d[1] / eta, -d[2] / eta);
        let (av, ax, ae) = (a[0], n[0], n[3]);
        let (bv, bx, be) = (bb[0], d[0], d[3]);
        let w = nv / dv;
        let wx = (nx * dv - nv * dx) / (dv * dv);
        let we = (ne * dv - nv * de) / (dv * dv);
        let idx = j * cols + k;
        let t = tau.rho.values()[idx];
        let td = tau.d_rho.values()[idx];
        let tdb = tau.d_bar_rho.values()[idx];
        let tx = td + tdb;
        let ty = i * (td - tdb);
        let gap = t - bv;
        let rho = av + w * gap;
        let rx = ax + wx * gap + w * (tx - bx);
        let ry = sigma * ae + sigma * we * gap + w * (ty - sigma * be);
        let (d, d_bar) = wirtinger(rx, ry);
        Ok(NodeValue { rho, d, d_bar })
    })?;
    Ok(ExtensionField {
        rho,
        boundary: omega,
        d_rho,
        d_bar_rho,
        source: ExtensionSource::General,
        certificate: None,
    })
}

/// `μ = ∂̄ρ / ∂ρ` with the WP norm attached.
pub fn beltrami_of_field(e: &ExtensionField) -> Result<BeltramiField> {
    let min = e.min_d_rho();
    if !(min >= JACOBIAN_FLOOR) {
        return Err(Error::DegenerateJacobian(min));
    }
    let mu = e.d_bar_rho.zip_with(&e.d_rho, |a, b| a / b)?;
    BeltramiField::new(mu)
}

/// `(1/|y|) ∫_{-|y|}^{|y|} |u(x+t) - u(x)|² dt`.
pub fn oscillation_majorant(u: &SampledLineFunction, x: f64, y: f64) -> Result<f64> {
    let eta = y.abs();
    if eta == 0.0 {
        return Err(Error::Parameter("scale must be non-zero".into()));
    }
    if !u.covers(x - eta, x + eta) {
        return Err(Error::Domain(format!("window around {x} leaves the data")));
    }
    let m = subnode_count(eta, resolution(u)).max(65);
    let dt = 2.0 * eta / (m - 1) as f64;
    let c = u.value_at(x);
    let mut acc = 0.0;
    for i in 0..m {
        let w = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
        acc += w * (u.value_at(x - eta + dt * i as f64) - c).norm_sqr();
    }
    Ok(acc * dt / eta)
}
