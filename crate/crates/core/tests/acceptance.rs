//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line
//! with its measured values and elapsed time; the test fails if any does.

mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::{Duration, Instant};
use wpcurve::extension::{beltrami_of_field, extension_general, tau_bilipschitz, ExtensionField, ExtensionSource};
use wpcurve::fixtures::{self, calibration_suite, Member, Profile};
use wpcurve::io::to_json;
use wpcurve::lab::*;
use wpcurve::numerics::{make_line_grid, HalfPlaneField, HalfPlaneGrid, MonotoneBoundaryMap, Orientation, SampledLineFunction, Spacing};
use wpcurve::spaces::{bmo_norm, h12_value, BeltramiField, IntervalFamily};
use wpcurve::welding::beltrami_compose;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn failed_checks(r: &ExperimentReport) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| c.verdict != Verdict::Pass)
        .map(|c| format!("{}/{} {:?}", r.experiment, c.name, c.measured))
        .collect()
}

fn max_measured(reports: &[ExperimentReport], check: &str, key: &str) -> f64 {
    reports
        .iter()
        .filter_map(|r| r.check(check))
        .filter_map(|c| c.measured.get(key).copied())
        .fold(0.0, f64::max)
}

fn zero(line: &Arc<wpcurve::numerics::LineGrid>) -> SampledLineFunction {
    SampledLineFunction::from_real_fn(line.clone(), Some(1.0), |_| 0.0).unwrap()
}

fn identity_suite() -> Outcome {
    let cfg = ExperimentConfig::default();
    let line = cfg.grid.line().unwrap();
    let b = wpcurve::curve::TangentAngle::new(zero(&line)).unwrap();
    let mut worst: f64 = 0.0;
    for orientation in [Orientation::Upper, Orientation::Lower] {
        let grid = cfg.grid.field(&line, orientation).unwrap();
        let tau = tau_bilipschitz(&b, &grid).unwrap();
        let e = extension_general(&b, &zero(&line), &tau, &grid).unwrap();
        for j in 0..grid.rows() {
            for k in 0..grid.cols() {
                worst = worst.max((e.rho.at(j, k) - grid.point(j, k)).norm());
            }
        }
        worst = worst.max(beltrami_of_field(&e).unwrap().sup());
    }
    let w = weld_angle(&zero(&line), cfg.grid.resolution, false).unwrap();
    let window = 0.5 * cfg.grid.half_extent;
    for (x, z) in w.curve.arc().iter().zip(w.curve.points()) {
        worst = worst.max((z - x).norm());
    }
    for map in [&w.maps.left.boundary_map, &w.maps.right.boundary_map, &w.record.h] {
        for &x in map.nodes().iter().filter(|x| x.abs() <= window) {
            worst = worst.max((map.eval(x) - x).norm());
        }
    }
    outcome(worst < 1e-4, format!("max deviation from identity {worst:.3e}"))
}

fn h12_oracle() -> Outcome {
    let l = 12.0;
    let grid = Arc::new(make_line_grid(l, 2049, Spacing::Uniform).unwrap());
    let mut worst: f64 = 0.0;
    for (name, f) in common::smooth_fixtures() {
        let u = SampledLineFunction::from_real_fn(grid.clone(), None, |x| f(x)).unwrap();
        let ours = h12_value(&u);
        let oracle = common::fourier_h12(&f, l, 24.0);
        let rel = (ours - oracle).abs() / oracle;
        assert!(rel.is_finite(), "{name}");
        worst = worst.max(rel);
    }
    outcome(worst <= 0.02, format!("max relative gap {worst:.4}"))
}

fn prop61() -> Outcome {
    let mut reports = Vec::new();
    for profile in [Profile::Bump, Profile::TwoBump, Profile::SmoothedStepPair] {
        let cfg = ExperimentConfig { perturbation: Member::new(profile, 1.0), ..Default::default() };
        reports.push(prop61_scaling(&cfg).unwrap());
    }
    let failures: Vec<String> = reports.iter().flat_map(failed_checks).collect();
    let spread = max_measured(&reports, "upper-ratio-spread", "spread").max(max_measured(&reports, "lower-ratio-spread", "spread"));
    outcome(failures.is_empty(), format!("max spread {spread:.3} {failures:?}"))
}

fn lemma31() -> Outcome {
    let line = fixtures::default_line_grid();
    let probe = ProbeGrid::default();
    let mut reports = Vec::new();
    for bm in calibration_suite() {
        let b = bm.angle(&line).unwrap();
        for um in calibration_suite() {
            let u = um.sample(&line).unwrap();
            if bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value <= 0.05 {
                reports.push(lemma31_ratio_probe(&b, &u, &probe).unwrap());
            }
        }
    }
    let failures: Vec<String> = reports.iter().flat_map(failed_checks).collect();
    outcome(!reports.is_empty() && failures.is_empty(), format!("{} pairs probed {failures:?}", reports.len()))
}

fn suite_reports(run: fn(&ExperimentConfig) -> wpcurve::Result<ExperimentReport>) -> Vec<ExperimentReport> {
    calibration_suite()
        .into_iter()
        .map(|base| run(&ExperimentConfig { base, ..Default::default() }).unwrap())
        .collect()
}

fn trace_identity() -> Outcome {
    let reports = suite_reports(thm41_equivalence);
    let failures: Vec<String> = reports.iter().flat_map(failed_checks).collect();
    let delta = max_measured(&reports, "self-convergence", "delta");
    let gap = max_measured(&reports, "trace-identity", "real gap").max(max_measured(&reports, "trace-identity", "imaginary gap"));
    outcome(failures.is_empty(), format!("max trace gap {gap:.3e}, max delta {delta:.3e} {failures:?}"))
}

fn symmetry() -> Outcome {
    let reports = suite_reports(symmetry_suite);
    let failures: Vec<String> = reports.iter().flat_map(failed_checks).collect();
    let checks = reports.iter().map(|r| r.checks.len()).sum::<usize>();
    outcome(failures.is_empty() && checks == 5 * reports.len(), format!("{checks} identities {failures:?}"))
}

fn continuity() -> Outcome {
    let r = continuity_sweep(&ExperimentConfig::default()).unwrap();
    let failures = failed_checks(&r);
    let directions = ["forward-monotone", "forward-final", "reverse-monotone", "reverse-bracket"];
    let present = directions.iter().all(|n| r.check(n).is_some());
    let last = r.check("forward-final").and_then(|c| c.measured.get("d").copied()).unwrap_or(f64::NAN);
    outcome(present && failures.is_empty() && last < 0.05, format!("d(0.025) = {last:.4} {failures:?}"))
}

fn ground_truth() -> MonotoneBoundaryMap {
    let fine = Arc::new(make_line_grid(17.0, 16385, Spacing::Uniform).unwrap());
    let b = Member::new(Profile::Bump, 0.3).sample(&fine).unwrap();
    let zb = wpcurve::curve::gamma_u(&b).unwrap().0;
    let x = make_line_grid(16.0, 4097, Spacing::Uniform).unwrap();
    let values = x.nodes().iter().map(|&t| zb.eval(t + 0.1 * t.tanh())).collect();
    MonotoneBoundaryMap::new(x.nodes().to_vec(), values, false).unwrap()
}

fn decomposition() -> Outcome {
    let tol = Tolerances::default();
    let grid = fixtures::line_grid(16.0, 2049).unwrap();
    let id = MonotoneBoundaryMap::identity(grid.nodes().to_vec()).unwrap();
    let reports = [decomposition_roundtrip(&id, &tol).unwrap(), decomposition_roundtrip(&ground_truth(), &tol).unwrap()];
    let failures: Vec<String> = reports.iter().flat_map(failed_checks).collect();
    let rec = max_measured(&reports, "reconstruction", "sup gap");
    let log = max_measured(&reports, "log-derivative", "sup gap");
    outcome(failures.is_empty(), format!("reconstruction {rec:.3e}, log-derivative {log:.3e} {failures:?}"))
}

/// `F(z) = z + a sin(z̄/2)` composed with
/// `H(z) = z + c z²/10 + b (z - z̄) cos(z̄/3)/2`.
struct Case {
    a: Complex64,
    b: Complex64,
    c: f64,
}

impl Case {
    fn f(&self, z: Complex64) -> Complex64 {
        z + self.a * (z.conj() / 2.0).sin()
    }
    fn mu_f(&self, z: Complex64) -> Complex64 {
        self.a * 0.5 * (z.conj() / 2.0).cos()
    }
    fn h(&self, z: Complex64) -> Complex64 {
        z + self.c * z * z / 10.0 + self.b * (z - z.conj()) * (z.conj() / 3.0).cos() / 2.0
    }
    fn dh(&self, z: Complex64) -> Complex64 {
        1.0 + self.c * z / 5.0 + self.b * (z.conj() / 3.0).cos() / 2.0
    }
    fn dbar_h(&self, z: Complex64) -> Complex64 {
        let w = z.conj() / 3.0;
        -self.b * w.cos() / 2.0 - self.b * (z - z.conj()) * w.sin() / 6.0
    }
}

fn fd_beltrami<F: Fn(Complex64) -> Complex64>(g: F, z: Complex64) -> Complex64 {
    let d = 1e-5;
    let i = Complex64::i();
    let gx = (g(z + d) - g(z - d)) / (2.0 * d);
    let gy = (g(z + i * d) - g(z - i * d)) / (2.0 * d);
    (gx + i * gy) / (gx - i * gy)
}

fn composition() -> Outcome {
    let x = make_line_grid(2.0, 129, Spacing::Uniform).unwrap();
    let grid = Arc::new(HalfPlaneGrid::dyadic(x, 1.0, 6, 4, Orientation::Upper).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut disc = |r: f64| Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let case = Case { a: disc(0.2), b: disc(0.1), c: disc(0.1).re };
        let mu_f = BeltramiField::new(HalfPlaneField::from_fn(grid.clone(), |z| case.mu_f(z)).unwrap()).unwrap();
        let h = ExtensionField {
            rho: HalfPlaneField::from_fn(grid.clone(), |z| case.h(z)).unwrap(),
            boundary: MonotoneBoundaryMap::identity(vec![-2.0, 2.0]).unwrap(),
            d_rho: HalfPlaneField::from_fn(grid.clone(), |z| case.dh(z)).unwrap(),
            d_bar_rho: HalfPlaneField::from_fn(grid.clone(), |z| case.dbar_h(z)).unwrap(),
            source: ExtensionSource::Base,
            certificate: None,
        };
        let comp = beltrami_compose(&mu_f, &h).unwrap();
        for j in 1..grid.rows() - 1 {
            for k in 1..grid.cols() - 1 {
                let z = grid.point(j, k);
                let w = case.h(z);
                // images outside the grid of μ_F are interpolated from the edge
                if w.re.abs() > 1.95 || w.im > 0.98 || w.im < grid.y_min() {
                    continue;
                }
                let oracle = fd_beltrami(|p| case.f(case.h(p)), z);
                worst = worst.max((comp.mu.field().at(j, k) - oracle).norm());
            }
        }
    }
    outcome(worst <= 5e-3, format!("max interior gap {worst:.3e}"))
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig { base: Member::new(Profile::Bump, 0.3), ..Default::default() };
    let run = |sequential: bool| {
        wpcurve::par::force_sequential(sequential);
        let a = to_json(&thm41_equivalence(&cfg).unwrap()).unwrap();
        let b = to_json(&symmetry_suite(&cfg).unwrap()).unwrap();
        wpcurve::par::force_sequential(false);
        (a, b)
    };
    let first = run(false);
    let second = run(false);
    let sequential = run(true);
    let pass = first == second && first == sequential;
    outcome(pass, format!("config {} repeated and sequential runs identical: {pass}", &cfg.hash()[..12]))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("identity suite", identity_suite, Duration::from_secs(10)),
        ("H^1/2 Fourier agreement", h12_oracle, Duration::from_secs(30)),
        ("WP/H^1/2 ratio stability", prop61, Duration::from_secs(300)),
        ("ratio bracket", lemma31, Duration::from_secs(60)),
        ("trace identity", trace_identity, Duration::from_secs(600)),
        ("welding symmetry", symmetry, Duration::from_secs(600)),
        ("continuity sweep", continuity, Duration::from_secs(1200)),
        ("decomposition roundtrip", decomposition, Duration::from_secs(120)),
        ("Beltrami composition", composition, Duration::from_secs(120)),
        ("determinism", determinism, Duration::from_secs(600)),
    ];
    let mut failed = Vec::new();
    println!();
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= *budget;
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {} ({:.1}s of {}s)", k + 1, o.detail, elapsed.as_secs_f64(), budget.as_secs());
        if !pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
