//! Measures the quantities behind the frozen constants in `constants.rs`.
//!
//! cargo run --release --example calibrate

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wpcurve::curve::{chord_arc_constant, gamma_u, DEFAULT_PAIR_BUDGET, DEFAULT_PAIR_SEED};
use wpcurve::extension::{beltrami_of_field, extension_base, ry_operator};
use wpcurve::fixtures::{self, calibration_suite, Member, Profile};
use wpcurve::lab::{thm41_equivalence, ExperimentConfig, ProbeGrid};
use wpcurve::numerics::{integrate_line, Orientation, SampledLineFunction};
use wpcurve::spaces::{bmo_norm, h12_value, john_nirenberg_probe, poisson_at, IntervalFamily};
use wpcurve::extension::oscillation_majorant;

fn bmo(u: &SampledLineFunction) -> f64 {
    bmo_norm(u, IntervalFamily::Dyadic).unwrap().value
}

fn main() {
    let line = fixtures::default_line_grid();
    let suite: Vec<(String, SampledLineFunction)> =
        calibration_suite().iter().map(|m| (m.label(), m.sample(&line).unwrap())).collect();
    let mut corpus = suite.clone();
    for &a in &[0.05, 0.2, 1.0] {
        let g = SampledLineFunction::from_real_fn(line.clone(), Some(6.0), |x| a * (-x * x).exp()).unwrap();
        corpus.push((format!("{a}*gauss"), g));
    }

    println!("== function spaces");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut gap_k: f64 = 0.0;
    let mut bmo_k: f64 = 0.0;
    let mut jn_c1: f64 = 0.0;
    for (name, u) in &corpus {
        let b = bmo(u);
        let h = h12_value(u);
        if b == 0.0 {
            continue;
        }
        bmo_k = bmo_k.max(b / h);
        for _ in 0..100 {
            let x = rng.gen_range(-6.0..6.0);
            let y = 2f64.powf(rng.gen_range(-5.0..1.0));
            let avg = integrate_line(u, x - y, x + y).unwrap() / (2.0 * y);
            gap_k = gap_k.max((avg - poisson_at(u, x, y)).norm() / b);
        }
        let jn = john_nirenberg_probe(u, (-1.0, 1.0), &[0.1], b).unwrap();
        jn_c1 = jn_c1.max(jn.exp_mean * (wpcurve::constants::JN_C2 - b) / b);
        println!("{name:>24}: bmo {b:.4e} h12 {h:.4e} exp-mean {:.4e}", jn.exp_mean);
    }
    println!("gap/bmo max {gap_k:.4}  bmo/h12 max {bmo_k:.4}  jn C1 needed {jn_c1:.4}");

    println!("== R_y estimates");
    let probe = ProbeGrid::default();
    let (mut lo, mut hi, mut kmv, mut kexp) = (f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    for m in calibration_suite() {
        let b = m.angle(&line).unwrap();
        for (name, u) in &corpus {
            let bu = bmo(u);
            if bu == 0.0 {
                continue;
            }
            let eu = u.map(|v| v.exp()).unwrap();
            for (x, y) in probe.points() {
                let r = ry_operator(&b, y, u, x).unwrap();
                if bu <= 0.05 {
                    let q = ry_operator(&b, y, &eu, x).unwrap().norm() / r.re.exp();
                    lo = lo.min(q);
                    hi = hi.max(q);
                }
                let mean = integrate_line(u, x - y, x + y).unwrap() / (2.0 * y);
                kmv = kmv.max((r - mean).norm() / bu);
                if bu <= 0.05 {
                    let n = 129;
                    let dt = 2.0 * y / (n - 1) as f64;
                    let mut acc = 0.0;
                    for k in 0..n {
                        let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                        acc += w * ((u.value_at(x - y + dt * k as f64) - r).exp() - 1.0).norm();
                    }
                    kexp = kexp.max(acc * dt / (2.0 * y) / bu);
                }
            }
            let _ = name;
        }
    }
    println!("lemma31 ratio in [{lo:.4}, {hi:.4}]  mean-value K {kmv:.4}  exp-mean K {kexp:.4}");

    println!("== base extension");
    let grid = fixtures::field_grid(&line, 8.0, 8, 2, Orientation::Upper).unwrap();
    let mut slope: f64 = 0.0;
    for &e in &[0.2, 0.1, 0.05] {
        let u = SampledLineFunction::from_real_fn(line.clone(), Some(6.0), |x| e * (-x * x).exp()).unwrap();
        let mu = beltrami_of_field(&extension_base(&u, &grid).unwrap()).unwrap();
        slope = slope.max(mu.sup() / h12_value(&u));
        println!("eps {e}: sup {:.4e} energy {:.4e} h12 {:.4e}", mu.sup(), mu.energy(), h12_value(&u));
    }
    println!("sup slope max {slope:.4}");
    let mut k61: f64 = 0.0;
    let mut zero_maj: f64 = 0.0;
    for &e in &[0.05, 0.1, 0.2] {
        let u = Member::new(Profile::Bump, e).sample(&line).unwrap();
        let mu = beltrami_of_field(&extension_base(&u, &grid).unwrap()).unwrap();
        let f = mu.field();
        let cols = grid.cols();
        for i in 0..grid.len() {
            let z = grid.point(i / cols, i % cols);
            let m2 = f.values()[i].norm_sqr();
            let maj = oscillation_majorant(&u, z.re, z.im).unwrap();
            if m2 <= 1e-18 {
                continue;
            }
            if maj == 0.0 {
                zero_maj = zero_maj.max(m2.sqrt());
                continue;
            }
            k61 = k61.max(m2 / maj);
        }
    }
    println!("lemma61 ratio max {k61:.4} largest |mu| where majorant vanishes {zero_maj:.3e}");

    println!("== welding");
    for m in calibration_suite() {
        let cfg = ExperimentConfig { base: m, ..Default::default() };
        let r = thm41_equivalence(&cfg).unwrap();
        let u = m.sample(&line).unwrap();
        let (_, c) = gamma_u(&u).unwrap();
        let k = chord_arc_constant(&c, DEFAULT_PAIR_BUDGET, DEFAULT_PAIR_SEED).unwrap();
        println!("{:>24}: h12 {:.4e} chord-arc {k:.4e}", m.label(), h12_value(&u));
        for c in &r.checks {
            println!("    {} {:?} {:?}", c.name, c.verdict, c.measured);
        }
    }
}
