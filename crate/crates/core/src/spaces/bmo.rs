use super::{NormMethod, NormReport};
use crate::error::{Error, Result};
use crate::numerics::{integrate_line, SampledLineFunction};
use serde::{Deserialize, Serialize};

/// Smallest dyadic interval, in grid cells.
pub const MIN_INTERVAL_CELLS: f64 = 4.0;
/// Translates of each dyadic interval, in steps of `length / DYADIC_SHIFTS`.
pub const DYADIC_SHIFTS: usize = 8;

/// Interval families for the BMO supremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalFamily {
    /// Dyadic lengths down to four cells, starts on a lattice of
    /// `length / DYADIC_SHIFTS`.
    Dyadic,
    /// Dyadic lengths with `refinement` sub-steps per octave and starts on
    /// a lattice of `length / refinement`.
    Dense { refinement: usize },
}

/// `(1/|I|) ∫_I |u - u_I|` with exact integration of `|·|` for real data.
pub fn mean_oscillation(u: &SampledLineFunction, a: f64, b: f64) -> Result<f64> {
    let len = b - a;
    if !(len > 0.0) {
        return Err(Error::Parameter(format!("empty interval [{a}, {b}]")));
    }
    let mean = integrate_line(u, a, b)? / len;
    Ok(abs_integral(u, a, b, mean) / len)
}

fn abs_integral(u: &SampledLineFunction, a: f64, b: f64, c: num_complex::Complex64) -> f64 {
    let x = u.nodes();
    let real = u.is_real() && c.im == 0.0;
    let (ka, _) = u.grid().locate(a);
    let (kb, _) = u.grid().locate(b);
    let mut acc = 0.0;
    for k in ka..=kb.min(x.len() - 2) {
        let lo = x[k].max(a);
        let hi = x[k + 1].min(b);
        if hi <= lo {
            continue;
        }
        let p = u.value_at(lo) - c;
        let q = u.value_at(hi) - c;
        let h = hi - lo;
        acc += if real {
            let (p, q) = (p.re, q.re);
            if p * q >= 0.0 {
                0.5 * h * (p.abs() + q.abs())
            } else {
                0.5 * h * (p * p + q * q) / (p.abs() + q.abs())
            }
        } else {
            0.5 * h * (p.norm() + q.norm())
        };
    }
    acc
}

fn intervals(u: &SampledLineFunction, family: IntervalFamily, max_len: f64) -> Vec<(f64, f64)> {
    let x = u.nodes();
    let (a0, b0) = (x[0], x[x.len() - 1]);
    let total = b0 - a0;
    let min_len = MIN_INTERVAL_CELLS * u.grid().max_spacing() * (1.0 - 1e-12);
    let mut out = Vec::new();
    match family {
        IntervalFamily::Dyadic => {
            let mut count = 1usize;
            loop {
                let len = total / count as f64;
                if len < min_len {
                    break;
                }
                if len <= max_len * (1.0 + 1e-12) {
                    let shift = len / DYADIC_SHIFTS as f64;
                    for i in 0..=(count - 1) * DYADIC_SHIFTS {
                        let a = a0 + shift * i as f64;
                        out.push((a, (a + len).min(b0)));
                    }
                }
                count *= 2;
            }
        }
        IntervalFamily::Dense { refinement } => {
            let r = refinement.max(1) as f64;
            let mut step = 0usize;
            loop {
                let len = total * 2f64.powf(-(step as f64) / r);
                if len < min_len {
                    break;
                }
                if len <= max_len * (1.0 + 1e-12) {
                    let shift = len / r;
                    let starts = ((total - len) / shift + 1e-9).floor() as usize;
                    for i in 0..=starts {
                        let a = a0 + shift * i as f64;
                        out.push((a, (a + len).min(b0)));
                    }
                }
                step += 1;
            }
        }
    }
    out
}

fn sup_oscillation(u: &SampledLineFunction, family: IntervalFamily, max_len: f64) -> Result<f64> {
    let ivs = intervals(u, family, max_len);
    let vals = crate::par::try_map_range(ivs.len(), |i| mean_oscillation(u, ivs[i].0, ivs[i].1))?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// Supremum of mean oscillation over an interval family.
pub fn bmo_norm(u: &SampledLineFunction, family: IntervalFamily) -> Result<NormReport> {
    let value = sup_oscillation(u, family, f64::INFINITY)?;
    Ok(NormReport {
        value,
        grid_size: vec![u.len()],
        exclusion_band: MIN_INTERVAL_CELLS * u.grid().max_spacing(),
        method: NormMethod::DyadicSup,
    })
}

/// Largest dyadic mean oscillation over intervals no longer than `scale`.
pub fn vmo_modulus(u: &SampledLineFunction, scale: f64) -> Result<f64> {
    let floor = MIN_INTERVAL_CELLS * u.grid().max_spacing();
    if scale < floor * (1.0 - 1e-12) {
        return Err(Error::Parameter(format!(
            "scale {scale} below resolution {floor}"
        )));
    }
    sup_oscillation(u, IntervalFamily::Dyadic, scale)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnNirenbergReport {
    pub interval: (f64, f64),
    pub bmo: f64,
    pub lambdas: Vec<f64>,
    /// `|{t ∈ I : |u - u_I| ≥ λ}| / |I|` per λ.
    pub distribution: Vec<f64>,
    /// `(1/|I|) ∫_I (e^{|u-u_I|} - 1)`.
    pub exp_mean: f64,
    /// `(p, (1/|I|) ∫_I |u-u_I|^p)` for p = 1, 2, 4.
    pub p_means: Vec<(u32, f64)>,
    pub bound: f64,
    pub within_bound: bool,
}

/// Distribution and moment probe of `|u - u_I|` on one interval, checked
/// against the calibrated exponential bound `C1 b / (C2 - b)`.
pub fn john_nirenberg_probe(
    u: &SampledLineFunction,
    interval: (f64, f64),
    lambdas: &[f64],
    bmo: f64,
) -> Result<JohnNirenbergReport> {
    let (a, b) = interval;
    let len = b - a;
    if !(len > 0.0) {
        return Err(Error::Parameter("empty interval".into()));
    }
    let mean = integrate_line(u, a, b)? / len;
    let cells = ((len / u.grid().min_spacing()).ceil() as usize).max(1);
    let m = (8 * cells).max(4096);
    let h = len / m as f64;
    // midpoint samples for the distribution
    let dev: Vec<f64> = (0..m)
        .map(|i| (u.value_at(a + (i as f64 + 0.5) * h) - mean).norm())
        .collect();
    let distribution = lambdas
        .iter()
        .map(|&l| dev.iter().filter(|&&d| d >= l).count() as f64 / m as f64)
        .collect();
    // trapezoid moments on the same lattice including end points
    let at = |i: usize| (u.value_at(a + i as f64 * h) - mean).norm();
    let nodes: Vec<f64> = (0..=m).map(at).collect();
    let moment = |g: &dyn Fn(f64) -> f64| {
        let mut acc = 0.0;
        for i in 0..m {
            acc += 0.5 * h * (g(nodes[i]) + g(nodes[i + 1]));
        }
        acc / len
    };
    let exp_mean = moment(&|d: f64| d.exp_m1());
    let p_means = [1u32, 2, 4]
        .iter()
        .map(|&p| (p, moment(&|d: f64| d.powi(p as i32))))
        .collect();
    let (c1, c2) = (crate::constants::JN_C1, crate::constants::JN_C2);
    let bound = if bmo < c2 { c1 * bmo / (c2 - bmo) } else { f64::INFINITY };
    Ok(JohnNirenbergReport {
        interval,
        bmo,
        lambdas: lambdas.to_vec(),
        distribution,
        exp_mean,
        p_means,
        bound,
        within_bound: exp_mean <= bound,
    })
}
