use super::config::ExperimentConfig;
use super::report::{Check, ExperimentReport, Provenance};
use super::{run_check, weld_angle, Weld};
use crate::constants::THM41_BRACKET;
use crate::curve::{chord_arc_constant, tangent_angle_from_curve, CurveSamples, DEFAULT_PAIR_BUDGET, DEFAULT_PAIR_SEED};
use crate::error::Result;
use crate::numerics::{invert_monotone, SampledLineFunction};
use crate::spaces::h12_value;
use crate::welding::{boundary_correspondence, riemann_maps, RiemannOptions};
use num_complex::Complex64;
use std::f64::consts::PI;

fn wrap(d: f64) -> f64 {
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

/// Trace identity, self-convergence, `‖b∘h₁⁻¹‖` against `‖b‖`, and the
/// chord-arc constant for one curve.
pub fn thm41_for_curve(c: &CurveSamples, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let tol = &cfg.tolerances;
    let opts = RiemannOptions { resolution: cfg.grid.resolution, field_grid: None, self_check: true };
    let maps = riemann_maps(c, &opts);
    let mut checks = Vec::new();
    let maps = match maps {
        Ok(m) => m,
        Err(e) => {
            checks.push(Check::inconclusive("trace-identity", &e));
            return Ok(ExperimentReport::new("thm41-equivalence", Provenance::of_config(cfg), checks));
        }
    };
    let angle = tangent_angle_from_curve(c, false).map(|t| t.b);
    let window = 0.5 * c.arc()[c.len() - 1].min(-c.arc()[0]);

    checks.push(run_check("trace-identity", || {
        let h1 = boundary_correspondence(&maps.left, c)?;
        let b = angle.clone()?;
        let s = h1.nodes();
        let h = h1.real_values();
        let mut re_gap: f64 = 0.0;
        let mut im_gap: f64 = 0.0;
        for k in 0..s.len() - 1 {
            let mid = 0.5 * (s[k] + s[k + 1]);
            if mid.abs() > window {
                continue;
            }
            let (_, l) = maps.left.eval_boundary(0.5 * (h[k] + h[k + 1]));
            let target = ((s[k + 1] - s[k]) / (h[k + 1] - h[k])).ln();
            re_gap = re_gap.max((l.re - target).abs());
            im_gap = im_gap.max(wrap(l.im - b.value_at(mid).re).abs());
        }
        Ok(Check::new("trace-identity", re_gap <= tol.trace_gap && im_gap <= tol.trace_gap)
            .with("real gap", re_gap)
            .with("imaginary gap", im_gap)
            .with("threshold", tol.trace_gap))
    }));

    checks.push(run_check("self-convergence", || {
        let cert = maps.convergence.expect("self check requested");
        Ok(Check::new("self-convergence", cert.delta < tol.self_convergence)
            .with("delta", cert.delta)
            .with("resolution", cert.resolution as f64))
    }));

    checks.push(run_check("angle-transport", || {
        let b = angle.clone()?;
        let h1inv = invert_monotone(&maps.left.correspondence)?;
        let grid = b.grid_arc().clone();
        let moved = SampledLineFunction::from_real_fn(grid, None, |x| b.value_at(h1inv.eval_re(x)).re)?;
        let nb = h12_value(&b);
        let nm = h12_value(&moved);
        let check = if nb == 0.0 && nm < 1e-9 {
            Check::new("angle-transport", true).note("constant angle")
        } else {
            let r = nm / nb;
            Check::new("angle-transport", r.is_finite() && r >= 1.0 / THM41_BRACKET && r <= THM41_BRACKET)
                .with("ratio", r)
        };
        Ok(check.with("transported", nm).with("angle", nb).with("bracket", THM41_BRACKET))
    }));

    checks.push(run_check("chord-arc", || {
        let k = chord_arc_constant(c, DEFAULT_PAIR_BUDGET, DEFAULT_PAIR_SEED)?;
        Ok(Check::new("chord-arc", k.is_finite()).with("constant", k))
    }));
    Ok(ExperimentReport::new("thm41-equivalence", Provenance::of_config(cfg), checks))
}

/// [`thm41_for_curve`] on the curve of the configured base angle.
pub fn thm41_equivalence(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let line = cfg.grid.line()?;
    let b = cfg.base.sample(&line)?;
    let (_, c) = crate::curve::gamma_u(&b)?;
    thm41_for_curve(&c, cfg)
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (p - a - d * t).norm()
}

fn one_sided_distance(from: &[Complex64], to: &[Complex64]) -> f64 {
    let stride = (from.len() / 256).max(1);
    let picks: Vec<Complex64> = from.iter().step_by(stride).cloned().collect();
    crate::par::max_range(picks.len(), |i| {
        to.windows(2)
            .map(|w| segment_distance(picks[i], w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    })
}

/// Reflection identities between the curves, maps and weldings of `b`
/// and `-b`.
pub fn symmetry_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let tol = cfg.tolerances.symmetry;
    let line = cfg.grid.line()?;
    let b = cfg.base.sample(&line)?;
    let nb = b.scale(Complex64::new(-1.0, 0.0));
    let pair: Vec<Result<Weld>> = crate::par::map_range(2, |k| {
        weld_angle(if k == 0 { &b } else { &nb }, cfg.grid.resolution, false)
    });
    let mut pair = pair.into_iter();
    let (plus, minus) = match (pair.next().expect("two"), pair.next().expect("two")) {
        (Ok(p), Ok(m)) => (p, m),
        (Err(e), _) | (_, Err(e)) => {
            let checks = vec![Check::inconclusive("curve-reflection", &e)];
            return Ok(ExperimentReport::new("symmetry-suite", Provenance::of_config(cfg), checks));
        }
    };
    let reflect = |z: &[Complex64]| -> Vec<Complex64> { z.iter().map(|v| v.conj()).collect() };
    let mut checks = Vec::new();

    let jz = reflect(plus.curve.points());
    let gap = jz.iter().zip(minus.curve.points()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    checks.push(Check::new("curve-reflection", gap <= tol).with("sup gap", gap));

    let image = one_sided_distance(&jz, minus.curve.points()).max(one_sided_distance(minus.curve.points(), &jz));
    checks.push(Check::new("image-reflection", image <= tol).with("hausdorff", image));

    let mut probes = Vec::new();
    for &y in &[0.05, 0.5, 2.0] {
        for k in 0..=16 {
            probes.push(Complex64::new(-4.0 + 0.5 * k as f64, y));
        }
    }
    let f_gap = probes
        .iter()
        .map(|&z| (minus.maps.left.eval(z).0 - plus.maps.right.eval(z.conj()).0.conj()).norm())
        .fold(0.0, f64::max);
    checks.push(Check::new("left-map-reflection", f_gap <= tol).with("sup gap", f_gap));
    let g_gap = probes
        .iter()
        .map(|&z| (minus.maps.right.eval(z.conj()).0 - plus.maps.left.eval(z).0.conj()).norm())
        .fold(0.0, f64::max);
    checks.push(Check::new("right-map-reflection", g_gap <= tol).with("sup gap", g_gap));

    let window = 0.5 * line.half_extent();
    let h_gap = (0..=160)
        .map(|k| {
            let t = window * (-1.0 + k as f64 / 80.0);
            (minus.record.h.eval_re(plus.record.h.eval_re(t)) - t).abs()
        })
        .fold(0.0, f64::max);
    checks.push(Check::new("welding-inverse", h_gap <= tol).with("sup gap", h_gap));
    for c in checks.iter_mut() {
        c.measured.insert("threshold".into(), tol);
    }
    Ok(ExperimentReport::new("symmetry-suite", Provenance::of_config(cfg), checks))
}

