use super::report::{Check, ExperimentReport, Provenance};
use super::{digest, run_check};
use crate::constants::{K_EXP_MEAN, K_LEMMA61, K_MEAN_VALUE, LEMMA31_BRACKET, MU_NOISE_FLOOR};
use crate::curve::TangentAngle;
use crate::error::Result;
use crate::extension::{beltrami_of_field, extension_general, oscillation_majorant, ry_operator, tau_bilipschitz};
use crate::numerics::{integrate_line, HalfPlaneField, HalfPlaneGrid, SampledLineFunction};
use crate::spaces::{bmo_norm, BeltramiField, IntervalFamily};
use num_complex::Complex64;
use std::sync::Arc;

/// Points `(x, y)` at which pointwise estimates are probed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl ProbeGrid {
    /// `n` abscissae evenly over `[-x_max, x_max]` and `n` heights
    /// geometric over `[y_min, y_max]`.
    pub fn new(n: usize, x_max: f64, y_min: f64, y_max: f64) -> Self {
        let m = (n.max(2) - 1) as f64;
        ProbeGrid {
            xs: (0..n).map(|k| x_max * (2.0 * k as f64 / m - 1.0)).collect(),
            ys: (0..n).map(|k| y_min * (y_max / y_min).powf(k as f64 / m)).collect(),
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.ys.iter().flat_map(|&y| self.xs.iter().map(move |&x| (x, y))).collect()
    }
}

impl Default for ProbeGrid {
    fn default() -> Self {
        ProbeGrid::new(20, 6.0, 1.0 / 32.0, 1.0)
    }
}

fn provenance(b: &TangentAngle, u: &SampledLineFunction) -> Provenance {
    let re: Vec<f64> = u.values().iter().map(|v| v.re).collect();
    let im: Vec<f64> = u.values().iter().map(|v| v.im).collect();
    Provenance::of_inputs(digest(&[&b.b.real_values(), &re, &im]))
}

/// `|R_y(e^u)| / e^{Re R_y(u)}` over the probe points.
pub fn lemma31_ratio_probe(b: &TangentAngle, u: &SampledLineFunction, probe: &ProbeGrid) -> Result<ExperimentReport> {
    let eu = u.map(|v| v.exp())?;
    let pts = probe.points();
    let check = run_check("ratio-bracket", || {
        let ratios = crate::par::try_map_range(pts.len(), |i| {
            let (x, y) = pts[i];
            let num = ry_operator(b, y, &eu, x)?.norm();
            let den = ry_operator(b, y, u, x)?.re.exp();
            Ok::<f64, crate::error::Error>(num / den)
        })?;
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        let k = LEMMA31_BRACKET;
        Ok(Check::new("ratio-bracket", lo >= 1.0 / k && hi <= k)
            .with("min", lo)
            .with("max", hi)
            .with("bracket", k))
    });
    Ok(ExperimentReport::new("lemma31-ratio", provenance(b, u), vec![check]))
}

/// Mean-value bound `|R_y(u)(x) - u_I| ≤ K ‖u‖_BMO` and exponential
/// bound `(1/|I|) ∫_I |e^{u - R_y(u)(x)} - 1| ≤ K' ‖u‖_BMO` with
/// `I = [x - y, x + y]`.
pub fn mean_value_probe(b: &TangentAngle, u: &SampledLineFunction, probe: &ProbeGrid) -> Result<ExperimentReport> {
    let bmo = bmo_norm(u, IntervalFamily::Dyadic)?.value;
    let pts = probe.points();
    let measured = crate::par::try_map_range(pts.len(), |i| {
        let (x, y) = pts[i];
        let r = ry_operator(b, y, u, x)?;
        let mean = integrate_line(u, x - y, x + y)? / (2.0 * y);
        let m = 129;
        let dt = 2.0 * y / (m - 1) as f64;
        let mut acc = 0.0;
        for k in 0..m {
            let w = if k == 0 || k == m - 1 { 0.5 } else { 1.0 };
            acc += w * ((u.value_at(x - y + dt * k as f64) - r).exp() - 1.0).norm();
        }
        Ok(((r - mean).norm(), acc * dt / (2.0 * y)))
    });
    let checks = match measured {
        Ok(m) => {
            let gap = m.iter().map(|p| p.0).fold(0.0, f64::max);
            let exp_mean = m.iter().map(|p| p.1).fold(0.0, f64::max);
            vec![
                Check::new("mean-value", gap <= K_MEAN_VALUE * bmo)
                    .with("sup gap", gap)
                    .with("bmo", bmo)
                    .with("constant", K_MEAN_VALUE),
                Check::new("exponential-mean", exp_mean <= K_EXP_MEAN * bmo)
                    .with("sup mean", exp_mean)
                    .with("bmo", bmo)
                    .with("constant", K_EXP_MEAN),
            ]
        }
        Err(e) => vec![Check::inconclusive("mean-value", &e)],
    };
    Ok(ExperimentReport::new("mean-value-estimates", provenance(b, u), checks))
}

/// Largest `|μ|² / majorant` over the nodes of `mu`; nodes where `|μ|` is
/// below the noise floor are skipped.
pub fn lemma61_majorant(u: &SampledLineFunction, mu: &BeltramiField) -> Result<ExperimentReport> {
    let f = mu.field();
    let g = f.grid();
    let cols = g.cols();
    let ratios = crate::par::try_map_range(g.len(), |i| {
        let z = g.point(i / cols, i % cols);
        let m2 = f.values()[i].norm_sqr();
        if m2 <= MU_NOISE_FLOOR * MU_NOISE_FLOOR {
            return Ok(0.0);
        }
        let maj = oscillation_majorant(u, z.re, z.im)?;
        Ok(if maj > 0.0 { m2 / maj } else { f64::INFINITY })
    });
    let re: Vec<f64> = f.values().iter().map(|v| v.re).collect();
    let im: Vec<f64> = f.values().iter().map(|v| v.im).collect();
    let ur: Vec<f64> = u.values().iter().map(|v| v.re).collect();
    let prov = Provenance::of_inputs(digest(&[&ur, &re, &im]));
    let checks = match ratios {
        Ok(r) => {
            let worst = r.iter().cloned().fold(0.0, f64::max);
            let majorized = worst <= K_LEMMA61;
            let energy = mu.energy();
            let mut finite = Check::new("finite-energy", majorized && energy.is_finite()).with("energy", energy);
            if !majorized {
                finite.verdict = super::Verdict::Inconclusive;
                finite = finite.note("pointwise bound fails");
            }
            vec![
                Check::new("majorized", majorized)
                    .with("max ratio", if worst.is_finite() { worst } else { f64::MAX })
                    .with("constant", K_LEMMA61),
                finite,
            ]
        }
        Err(e) => vec![Check::inconclusive("majorized", &e)],
    };
    Ok(ExperimentReport::new("lemma61-majorant", prov, checks))
}

#[derive(Debug, Clone)]
pub struct HolomorphyProbe {
    pub b: TangentAngle,
    pub u: SampledLineFunction,
    pub v: SampledLineFunction,
    /// Base points of the difference quotients.
    pub t_grid: Vec<Complex64>,
    pub step: f64,
    pub grid: Arc<HalfPlaneGrid>,
}

fn energy_norm(f: &HalfPlaneField) -> f64 {
    f.integrate(|y, v| v.norm_sqr() / (y * y)).sqrt()
}

/// Cauchy–Riemann residual of `t ↦ μ[u + t v]` from difference quotients
/// along `1` and `i`, relative in the WP energy norm.
pub fn lambda_holomorphy_probe(p: &HolomorphyProbe, tolerance: f64) -> Result<ExperimentReport> {
    let prov = provenance(&p.b, &p.u);
    let run = || -> Result<Vec<f64>> {
        let tau = tau_bilipschitz(&p.b, &p.grid)?;
        let lambda = |t: Complex64| -> Result<HalfPlaneField> {
            let ut = p.u.combine(Complex64::new(1.0, 0.0), &p.v, t)?;
            Ok(beltrami_of_field(&extension_general(&p.b, &ut, &tau, &p.grid)?)?.into_field())
        };
        let d = p.step;
        p.t_grid
            .iter()
            .map(|&t| {
                let m0 = lambda(t)?;
                let m1 = lambda(t + d)?;
                let mi = lambda(t + Complex64::new(0.0, d))?;
                let d1 = m1.zip_with(&m0, |a, b| (a - b) / d)?;
                let di = mi.zip_with(&m0, |a, b| (a - b) / Complex64::new(0.0, d))?;
                let scale = energy_norm(&d1).max(energy_norm(&di));
                let res = energy_norm(&d1.zip_with(&di, |a, b| a - b)?);
                Ok(if scale > 0.0 { res / scale } else { 0.0 })
            })
            .collect()
    };
    let check = match run() {
        Ok(r) => {
            let worst = r.iter().cloned().fold(0.0, f64::max);
            Check::new("cauchy-riemann", worst <= tolerance)
                .with("relative residual", worst)
                .with("threshold", tolerance)
        }
        Err(e) => Check::inconclusive("cauchy-riemann", &e),
    };
    Ok(ExperimentReport::new("lambda-holomorphy", prov, vec![check]))
}
