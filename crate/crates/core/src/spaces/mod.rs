//! Function-space norms on the line and on half planes.

mod bmo;
mod half_plane;
mod poisson;
mod sobolev;

pub use bmo::{bmo_norm, john_nirenberg_probe, mean_oscillation, vmo_modulus, IntervalFamily, JohnNirenbergReport};
pub use half_plane::{
    b2_norm, bers_l2_norm, bloch_seminorm, dirichlet_seminorm, wp_norm, BeltramiField,
    HyperbolicDensity, WpReport,
};
pub use poisson::{poisson_at, poisson_extend};
pub use sobolev::{h12_seminorm, h12_value, remove_mean};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    DoubleIntegral,
    DyadicSup,
    HalfPlaneQuadrature,
    HalfPlaneSup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub grid_size: Vec<usize>,
    pub exclusion_band: f64,
    pub method: NormMethod,
}
