//! Experiment drivers. Each returns an [`ExperimentReport`] whose checks
//! carry the measured numbers; upstream numerical failures become
//! inconclusive checks instead of failures.

mod config;
mod decompose;
mod equivalence;
mod probes;
mod report;
mod sweeps;

pub use config::{ExperimentConfig, GridSpec, Tolerances};
pub use decompose::{decompose, decomposition_roundtrip, perturb_log_derivative, Decomposition};
pub use equivalence::{symmetry_suite, thm41_equivalence, thm41_for_curve};
pub use probes::{
    lambda_holomorphy_probe, lemma31_ratio_probe, lemma61_majorant, mean_value_probe, HolomorphyProbe,
    ProbeGrid,
};
pub use report::{Check, ExperimentReport, Provenance, Verdict};
pub use sweeps::{continuity_sweep, prop61_scaling, recover_angle, Recovery};

use crate::curve::{gamma_u, CurveSamples};
use crate::error::Result;
use crate::fixtures::smooth_step;
use crate::numerics::SampledLineFunction;
use crate::spaces::h12_value;
use crate::welding::{riemann_maps, welding_map, RiemannMaps, RiemannOptions, WeldingRecord};
use sha2::{Digest, Sha256};

/// A curve synthesized from an angle together with its welding.
#[derive(Debug, Clone)]
pub struct Weld {
    pub curve: CurveSamples,
    pub maps: RiemannMaps,
    pub record: WeldingRecord,
}

pub fn weld_angle(b: &SampledLineFunction, resolution: usize, self_check: bool) -> Result<Weld> {
    let (_, curve) = gamma_u(b)?;
    let maps = riemann_maps(&curve, &RiemannOptions { resolution, field_grid: None, self_check })?;
    let record = welding_map(&maps.left, &maps.right, &curve)?;
    Ok(Weld { curve, maps, record })
}

/// Smooth cutoff equal to one on the central three quarters of `[-l, l]`
/// and vanishing from `0.75 l + 1` on.
pub(crate) fn taper(x: f64, l: f64) -> f64 {
    smooth_step(0.75 * l + 1.0 - x.abs()).min(1.0)
}

/// `H^{1/2}` seminorm of `f` cut off by [`taper`], for functions whose
/// tails are not constant.
pub fn windowed_h12(f: &SampledLineFunction) -> Result<f64> {
    let l = f.grid().half_extent();
    let c = 0.5 * (f.left_tail() + f.right_tail());
    let g = f.map_indexed(|x, v| (v - c) * taper(x, l))?;
    Ok(h12_value(&g))
}

pub(crate) fn run_check(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    match f() {
        Ok(c) => c,
        Err(e) => Check::inconclusive(name, &e),
    }
}

pub(crate) fn digest(parts: &[&[f64]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        for v in *p {
            h.update(v.to_le_bytes());
        }
        h.update([0xff]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
