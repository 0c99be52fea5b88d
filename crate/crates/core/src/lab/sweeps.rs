use super::config::ExperimentConfig;
use super::report::{Check, ExperimentReport, Provenance};
use super::{run_check, taper, weld_angle};
use crate::error::{Error, Result};
use crate::extension::{beltrami_of_field, extension_base};
use crate::numerics::{Orientation, SampledLineFunction};
use crate::par;
use crate::spaces::h12_value;
use crate::welding::hilbert_transform;
use num_complex::Complex64;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Maximum welds spent recovering one angle.
pub const RECOVERY_ITERATIONS: usize = 4;
/// Stop once the residual has dropped by this factor.
pub const RECOVERY_REDUCTION: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct Recovery {
    pub angle: SampledLineFunction,
    /// Final residual relative to the initial one.
    pub relative_residual: f64,
    pub welds: usize,
}

/// Tangent angle whose welding has `log h'` equal to `target` up to a
/// constant, by the linearized update `b ← b - ½ H(residual)` started at
/// `start`.
pub fn recover_angle(target: &SampledLineFunction, start: &SampledLineFunction, resolution: usize) -> Result<Recovery> {
    let l = start.grid().half_extent();
    let mut b = start.without_support();
    let mut first = None;
    let mut welds = 0;
    loop {
        let current = weld_angle(&b, resolution, false)?.record.log_h_prime;
        welds += 1;
        let r = target.combine(ONE, &current, -ONE)?;
        let c = 0.5 * (r.left_tail() + r.right_tail());
        let r = r.map_indexed(|x, v| (v - c) * taper(x, l))?;
        let size = h12_value(&r);
        let r0 = *first.get_or_insert(size);
        let rel = if r0 > 0.0 { size / r0 } else { 0.0 };
        if rel <= RECOVERY_REDUCTION || welds > RECOVERY_ITERATIONS {
            return Ok(Recovery { angle: b, relative_residual: rel, welds });
        }
        let step = hilbert_transform(&r)?;
        b = b.combine(ONE, &step, Complex64::new(-0.5, 0.0))?.map(|v| Complex64::new(v.re, 0.0))?;
    }
}

fn ladder_check(name: &str, eps: &[f64], values: &[f64], slack: f64) -> Check {
    let ok = values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack));
    let mut c = Check::new(name, ok);
    for (e, v) in eps.iter().zip(values) {
        c = c.with(format!("eps={e}"), *v);
    }
    c
}

/// Decay of `‖log h'_{b+εv} - log h'_b‖` along the ladder, and of the
/// recovered `‖b_ε - b‖` when `log h'_b` is perturbed by `εv`.
pub fn continuity_sweep(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let tol = &cfg.tolerances;
    let line = cfg.grid.line()?;
    let b = cfg.base.sample(&line)?;
    let v = cfg.perturbation.sample(&line)?;
    let eps = &cfg.epsilon_ladder;
    let resolution = cfg.grid.resolution;
    let mut checks = Vec::new();

    let base = match weld_angle(&b, resolution, false) {
        Ok(w) => w.record.log_h_prime,
        Err(e) => {
            checks.push(Check::inconclusive("forward-monotone", &e));
            return Ok(ExperimentReport::new("continuity-sweep", Provenance::of_config(cfg), checks));
        }
    };

    let forward: Vec<Result<f64>> = par::map_range(eps.len(), |k| {
        let bk = b.combine(ONE, &v, Complex64::new(eps[k], 0.0))?;
        let lk = weld_angle(&bk, resolution, false)?.record.log_h_prime;
        Ok(h12_value(&lk.combine(ONE, &base, -ONE)?))
    });
    let forward: Result<Vec<f64>> = forward.into_iter().collect();
    match forward {
        Ok(d) => {
            checks.push(ladder_check("forward-monotone", eps, &d, tol.monotone_slack));
            let last = *d.last().expect("non-empty ladder");
            checks.push(
                Check::new("forward-final", last < tol.continuity_final)
                    .with("d", last)
                    .with("threshold", tol.continuity_final),
            );
        }
        Err(e) => checks.push(Check::inconclusive("forward-monotone", &e)),
    }

    let v_norm = h12_value(&v);
    let reverse: Vec<Result<(f64, f64)>> = par::map_range(eps.len(), |k| {
        let target = base.combine(ONE, &v, Complex64::new(eps[k], 0.0))?;
        let rec = recover_angle(&target, &b, resolution)?;
        let diff = rec.angle.combine(ONE, &b.without_support(), -ONE)?;
        Ok((h12_value(&diff), rec.relative_residual))
    });
    let reverse: Result<Vec<(f64, f64)>> = reverse.into_iter().collect();
    match reverse {
        Ok(r) => {
            let dist: Vec<f64> = r.iter().map(|p| p.0).collect();
            checks.push(ladder_check("reverse-monotone", eps, &dist, tol.monotone_slack));
            let k = tol.reverse_bracket;
            let residual = r.iter().map(|p| p.1).fold(0.0, f64::max);
            let check = if v_norm == 0.0 {
                Check::new("reverse-bracket", dist.iter().all(|&d| d == 0.0)).note("zero perturbation")
            } else {
                let ratios: Vec<f64> = dist.iter().zip(eps).map(|(d, e)| d / (e * v_norm)).collect();
                let ok = ratios.iter().all(|&q| q >= 1.0 / k && q <= k);
                let mut c = Check::new("reverse-bracket", ok);
                for (e, q) in eps.iter().zip(&ratios) {
                    c = c.with(format!("ratio eps={e}"), *q);
                }
                c
            };
            checks.push(check.with("bracket", k).with("max relative residual", residual));
        }
        Err(e) => checks.push(Check::inconclusive("reverse-monotone", &e)),
    }
    Ok(ExperimentReport::new("continuity-sweep", Provenance::of_config(cfg), checks))
}

/// `(sup|μ| + energy^{1/2}) / ‖u‖_{H^{1/2}}` along `u = ε v` for the base
/// extension in both half planes.
pub fn prop61_scaling(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let tol = &cfg.tolerances;
    let line = cfg.grid.line()?;
    let v = cfg.perturbation.sample(&line)?;
    let v_norm = h12_value(&v);
    if v_norm == 0.0 {
        return Err(Error::Parameter("scaling needs a non-zero perturbation".into()));
    }
    let eps = &cfg.epsilon_ladder;
    let mut checks = Vec::new();
    let mut energies = Vec::new();
    for orientation in [Orientation::Upper, Orientation::Lower] {
        let side = match orientation {
            Orientation::Upper => "upper",
            Orientation::Lower => "lower",
        };
        let measured: Result<Vec<(f64, f64)>> = (|| {
            let grid = cfg.grid.field(&line, orientation)?;
            eps.iter()
                .map(|&e| {
                    let u = v.scale(Complex64::new(e, 0.0));
                    let mu = beltrami_of_field(&extension_base(&u, &grid)?)?;
                    let n = mu.norm();
                    Ok((n.value / (e * v_norm), n.energy.sqrt() / e))
                })
                .collect()
        })();
        let name = format!("{side}-ratio-spread");
        checks.push(run_check(&name, || {
            let m = measured.clone()?;
            let ratios: Vec<f64> = m.iter().map(|p| p.0).collect();
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let spread = hi / lo;
            let mut c = Check::new(&name, spread <= tol.ratio_spread)
                .with("spread", spread)
                .with("threshold", tol.ratio_spread);
            for (e, q) in eps.iter().zip(&ratios) {
                c = c.with(format!("ratio eps={e}"), *q);
            }
            Ok(c)
        }));
        energies.push(measured.map(|m| m.iter().map(|p| p.1).collect::<Vec<f64>>()));
    }
    checks.push(run_check("half-plane-match", || {
        let up = energies[0].clone()?;
        let low = energies[1].clone()?;
        let worst = up
            .iter()
            .zip(&low)
            .map(|(a, b)| (a - b).abs() / a.max(*b).max(1e-300))
            .fold(0.0, f64::max);
        Ok(Check::new("half-plane-match", worst <= tol.half_plane_match)
            .with("relative gap", worst)
            .with("threshold", tol.half_plane_match))
    }));
    Ok(ExperimentReport::new("prop61-scaling", Provenance::of_config(cfg), checks))
}
