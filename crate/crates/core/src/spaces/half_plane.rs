use super::{NormMethod, NormReport};
use crate::error::{Error, Result};
use crate::numerics::{HalfPlaneField, Orientation};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Poincaré density `1/|Im z|` on a half plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperbolicDensity {
    pub orientation: Orientation,
}

impl HyperbolicDensity {
    pub fn at(&self, z: Complex64) -> f64 {
        1.0 / z.im.abs()
    }
}

fn report(field: &HalfPlaneField, value: f64, method: NormMethod) -> NormReport {
    NormReport {
        value,
        grid_size: vec![field.grid().cols(), field.grid().rows()],
        exclusion_band: field.grid().y_min(),
        method,
    }
}

/// `((1/π) ∬ |φ'|²)^{1/2}` from samples of `φ'`.
pub fn dirichlet_seminorm(phi_prime: &HalfPlaneField) -> NormReport {
    let e = phi_prime.integrate(|_, v| v.norm_sqr()) / PI;
    report(phi_prime, e.sqrt(), NormMethod::HalfPlaneQuadrature)
}

/// `sup |φ'| |y|`.
pub fn bloch_seminorm(phi_prime: &HalfPlaneField) -> NormReport {
    let v = sup_weighted(phi_prime, 1);
    report(phi_prime, v, NormMethod::HalfPlaneSup)
}

/// `sup |φ| y²`.
pub fn b2_norm(phi: &HalfPlaneField) -> NormReport {
    let v = sup_weighted(phi, 2);
    report(phi, v, NormMethod::HalfPlaneSup)
}

/// `((1/π) ∬ |φ|² y²)^{1/2}`.
pub fn bers_l2_norm(phi: &HalfPlaneField) -> NormReport {
    let e = phi.integrate(|y, v| v.norm_sqr() * y * y) / PI;
    report(phi, e.sqrt(), NormMethod::HalfPlaneQuadrature)
}

fn sup_weighted(field: &HalfPlaneField, power: i32) -> f64 {
    let cols = field.grid().cols();
    let heights = field.grid().heights();
    field
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v.norm() * heights[i / cols].powi(power))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WpReport {
    pub sup: f64,
    /// `(1/π) ∬ |μ|²/y²`.
    pub energy: f64,
    /// `sup + energy^{1/2}`.
    pub value: f64,
}

pub fn wp_norm(mu: &HalfPlaneField) -> Result<WpReport> {
    let sup = mu.sup_norm();
    if sup >= 1.0 {
        return Err(Error::NotBeltrami(sup));
    }
    let energy = mu.integrate(|y, v| v.norm_sqr() / (y * y)) / PI;
    Ok(WpReport { sup, energy, value: sup + energy.sqrt() })
}

/// Field with `sup |μ| < 1` and its Weil-Petersson norm.
#[derive(Debug, Clone, PartialEq)]
pub struct BeltramiField {
    field: HalfPlaneField,
    norm: WpReport,
}

impl BeltramiField {
    pub fn new(field: HalfPlaneField) -> Result<Self> {
        let norm = wp_norm(&field)?;
        Ok(BeltramiField { field, norm })
    }

    pub fn field(&self) -> &HalfPlaneField {
        &self.field
    }

    pub fn norm(&self) -> WpReport {
        self.norm
    }

    pub fn sup(&self) -> f64 {
        self.norm.sup
    }

    pub fn energy(&self) -> f64 {
        self.norm.energy
    }

    pub fn into_field(self) -> HalfPlaneField {
        self.field
    }
}
