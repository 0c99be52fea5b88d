use proptest::prelude::*;
use std::sync::Arc;
use wpcurve::numerics::*;
use wpcurve::{Complex64, Error};

fn grid(l: f64, n: usize) -> Arc<LineGrid> {
    Arc::new(make_line_grid(l, n, Spacing::Uniform).unwrap())
}

fn real_fn(g: &Arc<LineGrid>, f: impl Fn(f64) -> f64) -> SampledLineFunction {
    SampledLineFunction::from_real_fn(g.clone(), None, f).unwrap()
}

#[test]
fn uniform_grids() {
    let g = make_line_grid(1.0, 17, Spacing::Uniform).unwrap();
    assert_eq!(g.nodes()[0], -1.0);
    assert_eq!(g.nodes()[1], -0.875);
    assert_eq!(g.nodes()[8], 0.0);
    assert_eq!(g.nodes()[16], 1.0);
    let g = make_line_grid(8.0, 257, Spacing::Uniform).unwrap();
    assert!(g.nodes().windows(2).all(|w| (w[1] - w[0] - 1.0 / 16.0).abs() < 1e-14));
}

#[test]
fn graded_grid_concentrates_near_zero() {
    let g = make_line_grid(1.0, 33, Spacing::Graded).unwrap();
    let x = g.nodes();
    assert_eq!(x.len(), 33);
    assert!(x.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(x[16], 0.0);
    assert!((x[32] - 1.0).abs() < 1e-15);
    let steps: Vec<f64> = x[16..].windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.windows(2).all(|w| w[1] > w[0]));
    for k in 0..x.len() {
        assert!((x[k] + x[32 - k]).abs() < 1e-15);
    }
}

#[test]
fn bad_grids_are_rejected() {
    assert!(matches!(make_line_grid(0.0, 33, Spacing::Uniform), Err(Error::Parameter(_))));
    assert!(matches!(make_line_grid(-1.0, 33, Spacing::Uniform), Err(Error::Parameter(_))));
    assert!(matches!(make_line_grid(1.0, 8, Spacing::Graded), Err(Error::Parameter(_))));
}

#[test]
fn elementary_integrals() {
    let g = grid(1.0, 1025);
    let one = SampledLineFunction::constant(g.clone(), Complex64::new(1.0, 0.0));
    assert!((integrate_line(&one, 0.0, 1.0).unwrap().re - 1.0).abs() < 1e-14);
    let x = real_fn(&g, |x| x);
    assert!(integrate_line(&x, -1.0, 1.0).unwrap().norm() < 1e-15);
    assert!(matches!(integrate_line(&x, -2.0, 0.0), Err(Error::Domain(_))));
}

#[test]
fn square_against_richardson() {
    let at = |n: usize| {
        let g = grid(1.0, n);
        integrate_line(&real_fn(&g, |x| x * x), 0.0, 1.0).unwrap().re
    };
    let coarse = at(1025);
    let fine = at(2049);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    assert!((coarse - extrapolated).abs() < 1e-5);
    assert!((extrapolated - 1.0 / 3.0).abs() < 1e-12);

    let e1 = (at(257) - 1.0 / 3.0).abs();
    let e2 = (at(513) - 1.0 / 3.0).abs();
    assert!((e1 / e2).log2() >= 1.8);
}

#[test]
fn partial_cells_are_exact_for_linear_data() {
    let g = grid(2.0, 17);
    let f = real_fn(&g, |x| 3.0 * x + 1.0);
    let (a, b) = (-0.37, 1.61);
    let exact = 1.5 * (b * b - a * a) + (b - a);
    assert!((integrate_line(&f, a, b).unwrap().re - exact).abs() < 1e-13);
    assert!((integrate_line(&f, b, a).unwrap().re + exact).abs() < 1e-13);
}

fn map(n: usize, l: f64, f: impl Fn(f64) -> f64) -> MonotoneBoundaryMap {
    MonotoneBoundaryMap::from_fn(grid(l, n).nodes().to_vec(), f).unwrap()
}

#[test]
fn affine_inverses_and_compositions() {
    let id = map(33, 4.0, |x| x);
    assert_eq!(invert_monotone(&id).unwrap(), id);
    let double = map(33, 4.0, |x| 2.0 * x);
    let inv = invert_monotone(&double).unwrap();
    for (x, v) in inv.nodes().iter().zip(inv.values()) {
        assert_eq!(v.re, x / 2.0);
    }
    assert_eq!(compose_maps(&id, &double).unwrap(), double);
    let shift = map(33, 20.0, |x| x + 1.0);
    let c = compose_maps(&shift, &double).unwrap();
    for (x, v) in c.nodes().iter().zip(c.values()) {
        assert!((v.re - (2.0 * x + 1.0)).abs() < 1e-14);
    }
}

#[test]
fn tanh_roundtrips() {
    let h = map(4097, 8.0, |x| x + 0.1 * x.tanh());
    let inv = invert_monotone(&h).unwrap();
    let back = compose_maps(&h, &inv).unwrap();
    let twice = invert_monotone(&inv).unwrap();
    for k in 1..back.len() - 1 {
        let x = back.nodes()[k];
        assert!((back.values()[k].re - x).abs() < 1e-6);
    }
    for x in h.nodes().iter().filter(|x| x.abs() < 7.0) {
        assert!((twice.eval_re(*x) - h.eval_re(*x)).abs() < 1e-6);
    }
}

#[test]
fn non_monotone_maps_are_rejected() {
    let nodes = vec![0.0, 1.0, 2.0];
    assert!(matches!(MonotoneBoundaryMap::real(nodes.clone(), vec![0.0, 2.0, 1.0]), Err(Error::Invariant(_))));
    let complex = MonotoneBoundaryMap::new(nodes, vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)], false).unwrap();
    assert!(matches!(invert_monotone(&complex), Err(Error::Invariant(_))));
}

#[test]
fn fields_and_grids() {
    let x = make_line_grid(2.0, 33, Spacing::Uniform).unwrap();
    let g = Arc::new(HalfPlaneGrid::dyadic(x, 1.0, 6, 2, Orientation::Lower).unwrap());
    assert_eq!(g.rows(), 11);
    assert!(g.heights().windows(2).all(|w| w[1] < w[0]));
    assert!((g.y_min() - 1.0 / 32.0).abs() < 1e-15);
    assert!(g.point(0, 0).im < 0.0);
    let f = HalfPlaneField::from_fn(g.clone(), |z| z).unwrap();
    assert_eq!(f.at(3, 4), g.point(3, 4));
    let (wx, wy) = g.area_weights();
    let area: f64 = wx.iter().sum::<f64>() * wy.iter().sum::<f64>();
    assert!((f.integrate(|_, _| 1.0) - area).abs() < 1e-12);
    assert!(matches!(HalfPlaneField::new(g, vec![]), Err(Error::Invariant(_))));
}

proptest! {
    #[test]
    fn quadrature_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        lo in -4.0f64..0.0,
        hi in 0.0f64..4.0,
        p in 0.1f64..3.0,
    ) {
        let g = grid(4.0, 129);
        let f = real_fn(&g, |x| (p * x).sin());
        let h = real_fn(&g, |x| x * x - p);
        let combo = f.combine(Complex64::new(a, 0.0), &h, Complex64::new(b, 0.0)).unwrap();
        let lhs = integrate_line(&combo, lo, hi).unwrap();
        let rhs = integrate_line(&f, lo, hi).unwrap() * a + integrate_line(&h, lo, hi).unwrap() * b;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn inverse_of_inverse_is_identity(c in -0.5f64..0.5, s in 0.2f64..2.0) {
        prop_assume!(s + c > 0.05);
        let h = map(4097, 8.0, |x| s * x + c * x.tanh());
        let twice = invert_monotone(&invert_monotone(&h).unwrap()).unwrap();
        prop_assert_eq!(twice, h);
    }
}
