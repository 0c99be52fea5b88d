mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;
use wpcurve::constants::{K_BMO_H12, K_POISSON_GAP};
use wpcurve::fixtures::{self, calibration_suite};
use wpcurve::numerics::*;
use wpcurve::spaces::*;
use wpcurve::{Complex64, Error};

fn line(l: f64, n: usize) -> Arc<LineGrid> {
    Arc::new(make_line_grid(l, n, Spacing::Uniform).unwrap())
}

fn sample(g: &Arc<LineGrid>, f: impl Fn(f64) -> f64) -> SampledLineFunction {
    SampledLineFunction::from_real_fn(g.clone(), None, f).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn constants_have_no_oscillation() {
    let g = line(8.0, 513);
    let c = SampledLineFunction::constant(g, Complex64::new(2.5, -1.0));
    assert_eq!(h12_value(&c), 0.0);
    assert_eq!(bmo_norm(&c, IntervalFamily::Dyadic).unwrap().value, 0.0);
    assert_eq!(vmo_modulus(&c, 1.0).unwrap(), 0.0);
}

#[test]
fn h12_matches_fourier_oracle() {
    let g = line(12.0, 2049);
    for (name, f) in common::smooth_fixtures() {
        let value = h12_value(&sample(&g, f));
        let oracle = common::fourier_h12(f, 12.0, 24.0);
        assert!(rel(value, oracle) < 0.02, "{name}: {value} vs {oracle}");
    }
}

#[test]
fn h12_is_dilation_and_translation_invariant() {
    let g = line(16.0, 2049);
    let base = h12_value(&sample(&g, |x| (-x * x).exp()));
    for lambda in [0.5, 2.0] {
        let v = h12_value(&sample(&g, |x| (-(lambda * x) * (lambda * x)).exp()));
        assert!(rel(v, base) < 0.01, "lambda {lambda}: {v} vs {base}");
    }
    let shifted = h12_value(&sample(&g, |x| (-(x - 1.3) * (x - 1.3)).exp()));
    assert!(rel(shifted, base) < 0.01);
}

#[test]
fn unequal_tails_have_infinite_h12() {
    let g = line(8.0, 257);
    let step = SampledLineFunction::from_real_fn(g, Some(1.0), |x| fixtures::smooth_step(x)).unwrap();
    assert!(h12_value(&step).is_infinite());
}

fn triangle(x: f64) -> f64 {
    (1.0 - x.abs()).max(0.0)
}

#[test]
fn bmo_of_triangle_against_dense_family() {
    let g = line(4.0, 1025);
    let u = sample(&g, triangle);
    let value = bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value;
    let oracle = common::dense_bmo(triangle, 4.0, 4.0 * g.max_spacing(), 8);
    assert!(value <= oracle * (1.0 + 1e-9));
    assert!(rel(value, oracle) < 0.05, "{value} vs {oracle}");
}

#[test]
fn bmo_is_homogeneous_and_bounded_by_twice_the_sup() {
    let g = line(8.0, 513);
    for m in calibration_suite() {
        let u = m.sample(&g).unwrap();
        let b = bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value;
        assert!(b <= 2.0 * u.sup_norm());
        let scaled = bmo_norm(&u.scale(Complex64::new(-3.0, 0.0)), IntervalFamily::Dyadic).unwrap().value;
        assert!((scaled - 3.0 * b).abs() <= 1e-12 * (1.0 + b));
    }
}

#[test]
fn vmo_modulus_vanishes_linearly() {
    let g = line(8.0, 2049);
    let u = sample(&g, |x| (-x * x).exp());
    let scales = [0.5, 0.25, 0.125, 0.0625];
    let values: Vec<f64> = scales.iter().map(|&s| vmo_modulus(&u, s).unwrap()).collect();
    let n = scales.len() as f64;
    let lx: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    assert!(slope >= 0.9, "slope {slope}");
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
    let top = vmo_modulus(&u, 2.0 * g.half_extent()).unwrap();
    assert_eq!(top, bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value);
    assert!(matches!(vmo_modulus(&u, g.max_spacing()), Err(Error::Parameter(_))));
}

#[test]
fn bmo_is_controlled_by_h12_on_the_suite() {
    let g = fixtures::default_line_grid();
    for m in calibration_suite() {
        let u = m.sample(&g).unwrap();
        let b = bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value;
        assert!(b <= K_BMO_H12 * h12_value(&u) + 1e-12, "{}", m.label());
    }
}

#[test]
fn john_nirenberg_probe_cases() {
    let g = line(8.0, 1025);
    let zero = SampledLineFunction::constant(g.clone(), Complex64::new(1.0, 0.0));
    let r = john_nirenberg_probe(&zero, (-1.0, 1.0), &[0.01, 0.1], 0.0).unwrap();
    assert!(r.distribution.iter().all(|&d| d == 0.0));
    assert_eq!(r.exp_mean, 0.0);

    let unit = bmo_norm(&sample(&g, fixtures::bump), IntervalFamily::Dyadic).unwrap().value;
    let u = sample(&g, |x| 0.05 / unit * fixtures::bump(x));
    let b = bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value;
    assert!((b - 0.05).abs() < 1e-12);
    let r = john_nirenberg_probe(&u, (-1.0, 1.0), &[0.005, 0.01, 0.02], b).unwrap();
    assert!(r.exp_mean <= 0.2);
    assert!(r.within_bound);
    assert!(r.distribution.windows(2).all(|w| w[1] <= w[0]));

    let mean = integrate_line(&u, -1.0, 1.0).unwrap().re / 2.0;
    let m = 8192;
    let h = 2.0 / m as f64;
    let direct: f64 = (0..=m)
        .map(|i| {
            let x = -1.0 + i as f64 * h;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            w * h * (u.value_at(x).re - mean).powi(2)
        })
        .sum::<f64>()
        / 2.0;
    let p2 = r.p_means.iter().find(|(p, _)| *p == 2).unwrap().1;
    assert!(rel(p2, direct) < 1e-6);
}

fn upper(x_extent: f64, cols: usize, levels: usize, sub: usize) -> Arc<HalfPlaneGrid> {
    let x = make_line_grid(x_extent, cols, Spacing::Uniform).unwrap();
    Arc::new(HalfPlaneGrid::dyadic(x, 1.0, levels, sub, Orientation::Upper).unwrap())
}

#[test]
fn half_plane_norms_of_zero_and_constants() {
    let g = upper(4.0, 129, 6, 1);
    let z = HalfPlaneField::zeros(g.clone());
    assert_eq!(dirichlet_seminorm(&z).value, 0.0);
    assert_eq!(bloch_seminorm(&z).value, 0.0);
    assert_eq!(b2_norm(&z).value, 0.0);
    assert_eq!(bers_l2_norm(&z).value, 0.0);
    assert_eq!(wp_norm(&z).unwrap().value, 0.0);
    let phi = HalfPlaneField::from_fn(g, |z| 1.0 / (z + Complex64::new(0.0, 3.0))).unwrap();
    assert!(b2_norm(&phi).value.is_finite() && bers_l2_norm(&phi).value.is_finite());
}

#[test]
fn dirichlet_against_refined_quadrature() {
    let g = upper(4.0, 257, 8, 2);
    let f = HalfPlaneField::from_fn(g.clone(), |z| 1.0 / (z + Complex64::new(0.0, 2.0))).unwrap();
    let value = dirichlet_seminorm(&f).value;
    // 4x finer midpoint rule in (x, log y) over the same box
    let (nx, ny) = (4 * 256, 4 * 7 * 2 * 4);
    let (x0, x1) = (-4.0, 4.0);
    let (t0, t1) = (g.y_min().ln(), g.y_max().ln());
    let (dx, dt) = ((x1 - x0) / nx as f64, (t1 - t0) / ny as f64);
    let mut acc = 0.0;
    for j in 0..ny {
        let y = (t0 + (j as f64 + 0.5) * dt).exp();
        for i in 0..nx {
            let x = x0 + (i as f64 + 0.5) * dx;
            acc += dx * dt * y / (x * x + (y + 2.0) * (y + 2.0));
        }
    }
    let oracle = (acc / PI).sqrt();
    assert!(rel(value, oracle) < 0.01, "{value} vs {oracle}");
}

#[test]
fn b2_of_inverse_square() {
    let x = make_line_grid(4.0, 257, Spacing::Uniform).unwrap();
    let g = Arc::new(HalfPlaneGrid::dyadic(x, 1.0, 7, 1, Orientation::Upper).unwrap());
    assert!((g.y_min() - 1.0 / 64.0).abs() < 1e-15);
    let phi = HalfPlaneField::from_fn(g.clone(), |z| 1.0 / (z * z)).unwrap();
    let oracle = (0..g.rows())
        .flat_map(|j| (0..g.cols()).map(move |k| (j, k)))
        .map(|(j, k)| {
            let z = g.point(j, k);
            z.im * z.im / z.norm_sqr()
        })
        .fold(0.0, f64::max);
    let value = b2_norm(&phi).value;
    assert!(rel(value, 1.0) < 0.02);
    assert!(rel(value, oracle) < 1e-12);
}

fn box_grid() -> Arc<HalfPlaneGrid> {
    let x = make_line_grid(2.0, 1025, Spacing::Uniform).unwrap();
    let heights: Vec<f64> = (0..=700).map(|j| 3.0 - j as f64 / 256.0).collect();
    Arc::new(HalfPlaneGrid::with_heights(x, heights, Orientation::Upper).unwrap())
}

#[test]
fn wp_norm_of_a_box() {
    let g = box_grid();
    let c = Complex64::new(0.3, 0.2);
    let mu = HalfPlaneField::from_fn(g, |z| {
        if (1.0..=2.0).contains(&z.im) && (0.0..=1.0).contains(&z.re) {
            c
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .unwrap();
    let r = wp_norm(&mu).unwrap();
    let expected = c.norm() + c.norm() * (1.0 / (2.0 * PI)).sqrt();
    assert!(rel(r.value, expected) < 0.01, "{} vs {expected}", r.value);

    let twice = wp_norm(&mu.map(|v| 2.0 * v).unwrap()).unwrap();
    assert!((twice.energy - 4.0 * r.energy).abs() <= 1e-15 * twice.energy);
    assert_eq!(twice.sup, 2.0 * r.sup);

    let big = mu.map(|v| 2.0 * v / c.norm()).unwrap();
    assert!(matches!(wp_norm(&big), Err(Error::NotBeltrami(_))));
}

#[test]
fn wp_energy_is_additive_on_disjoint_supports() {
    let g = box_grid();
    let left = HalfPlaneField::from_fn(g.clone(), |z| if z.re < 0.0 { Complex64::new(0.2, 0.0) } else { Complex64::new(0.0, 0.0) }).unwrap();
    let right = HalfPlaneField::from_fn(g, |z| if z.re >= 0.0 { Complex64::new(0.0, -0.1) } else { Complex64::new(0.0, 0.0) }).unwrap();
    let both = left.zip_with(&right, |a, b| a + b).unwrap();
    let (a, b, ab) = (wp_norm(&left).unwrap(), wp_norm(&right).unwrap(), wp_norm(&both).unwrap());
    assert!((ab.energy - a.energy - b.energy).abs() <= 1e-14 * ab.energy);
}

#[test]
fn poisson_reproduces_constants() {
    let g = line(8.0, 257);
    let c = SampledLineFunction::constant(g.clone(), Complex64::new(0.7, 0.0));
    for (x, y) in [(0.0, 0.01), (3.0, 1.0), (-7.5, 5.0)] {
        assert!((poisson_at(&c, x, y) - Complex64::new(0.7, 0.0)).norm() < 1e-12);
    }
    let f = poisson_extend(&c, &upper(4.0, 65, 6, 1)).unwrap();
    assert!(f.values().iter().all(|v| (v - Complex64::new(0.7, 0.0)).norm() < 1e-12));
}

#[test]
fn poisson_semigroup() {
    let g = line(16.0, 2049);
    let u = SampledLineFunction::from_real_fn(g.clone(), Some(2.0), fixtures::bump).unwrap();
    let (y1, y2) = (0.25, 0.5);
    let level = SampledLineFunction::from_fn(g, None, |x| poisson_at(&u, x, y1)).unwrap();
    let scale = u.sup_norm();
    for x in [-3.0, -1.0, 0.0, 0.4, 2.5] {
        let twice = poisson_at(&level, x, y2);
        let direct = poisson_at(&u, x, y1 + y2);
        assert!((twice - direct).norm() < 0.01 * scale, "x={x}: {twice} vs {direct}");
    }
}

#[test]
fn poisson_gap_is_controlled_by_bmo() {
    let g = fixtures::default_line_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in calibration_suite().into_iter().skip(1) {
        let u = m.sample(&g).unwrap();
        let b = bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value;
        for _ in 0..100 {
            let x = rng.gen_range(-5.0..5.0);
            let y = rng.gen_range(0.05..3.0);
            let avg = integrate_line(&u, x - y, x + y).unwrap() / (2.0 * y);
            let gap = (avg - poisson_at(&u, x, y)).norm();
            assert!(gap <= K_POISSON_GAP * b, "{} at ({x}, {y}): {gap} vs {b}", m.label());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn h12_and_bmo_are_homogeneous(c in -4.0f64..4.0, shift in -2.0f64..2.0) {
        let g = line(8.0, 513);
        let u = sample(&g, |x| (-(x - shift) * (x - shift)).exp());
        let cu = u.scale(Complex64::new(c, 0.0));
        let (h, ch) = (h12_value(&u), h12_value(&cu));
        prop_assert!((ch - c.abs() * h).abs() <= 1e-12 * (1.0 + h));
        let (b, cb) = (
            bmo_norm(&u, IntervalFamily::Dyadic).unwrap().value,
            bmo_norm(&cu, IntervalFamily::Dyadic).unwrap().value,
        );
        prop_assert!((cb - c.abs() * b).abs() <= 1e-12 * (1.0 + b));
    }

    #[test]
    fn mean_removal_keeps_the_class(a in -3.0f64..3.0) {
        let g = line(8.0, 513);
        let u = SampledLineFunction::from_real_fn(g, Some(2.0), |x| a + fixtures::bump(x)).unwrap();
        let r = remove_mean(&u).unwrap();
        let mean = integrate_line(&r, -2.0, 2.0).unwrap();
        prop_assert!(mean.norm() < 1e-12);
        prop_assert!((h12_value(&r) - h12_value(&u)).abs() < 1e-12);
    }
}
