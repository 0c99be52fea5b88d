use proptest::prelude::*;
use std::sync::Arc;
use wpcurve::curve::CurveSamples;
use wpcurve::fixtures::{self, Member, Profile};
use wpcurve::io::*;
use wpcurve::lab::{Check, ExperimentConfig, ExperimentReport, GridSpec, Provenance, Tolerances};
use wpcurve::numerics::{make_line_grid, HalfPlaneField, HalfPlaneGrid, MonotoneBoundaryMap, Orientation, SampledLineFunction, Spacing};
use wpcurve::{Complex64, Error};

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

fn complex() -> impl Strategy<Value = Complex64> {
    (finite(), finite()).prop_map(|(a, b)| Complex64::new(a, b))
}

fn line_function() -> impl Strategy<Value = SampledLineFunction> {
    (8usize..40, 0.5f64..50.0).prop_flat_map(|(half, l)| {
        let n = 2 * half + 1;
        prop::collection::vec(complex(), n).prop_map(move |v| {
            let g = Arc::new(make_line_grid(l, n, Spacing::Uniform).unwrap());
            SampledLineFunction::new(g, v, None).unwrap()
        })
    })
}

fn increasing(n: usize) -> impl Strategy<Value = Vec<f64>> {
    (-1e3f64..1e3, prop::collection::vec(1e-6f64..10.0, n - 1)).prop_map(|(start, steps)| {
        let mut out = vec![start];
        for s in steps {
            out.push(out[out.len() - 1] + s);
        }
        out
    })
}

proptest! {
    #[test]
    fn floats_roundtrip_through_text(v in finite()) {
        let back: f64 = format_float(v).parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }

    #[test]
    fn functions_roundtrip(f in line_function()) {
        let g = function_from_csv(&function_to_csv(&f)).unwrap();
        prop_assert_eq!(g.nodes(), f.nodes());
        prop_assert_eq!(g.values(), f.values());
        prop_assert_eq!(g.support(), f.support());
    }

    #[test]
    fn monotone_maps_roundtrip((x, y) in (3usize..60).prop_flat_map(|n| (increasing(n), increasing(n)))) {
        let h = MonotoneBoundaryMap::real(x, y).unwrap();
        let back = map_from_csv(&map_to_csv(&h)).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn complex_maps_roundtrip((x, v) in (3usize..40).prop_flat_map(|n| (increasing(n), prop::collection::vec(complex(), n)))) {
        prop_assume!(v.windows(2).all(|w| w[0] != w[1]));
        let h = MonotoneBoundaryMap::new(x, v, false).unwrap();
        prop_assert_eq!(map_from_csv(&map_to_csv(&h)).unwrap(), h);
    }

    #[test]
    fn curves_roundtrip((s, z) in (3usize..60).prop_flat_map(|n| (increasing(n), prop::collection::vec(complex(), n)))) {
        prop_assume!(z.windows(2).all(|w| w[0] != w[1]));
        let c = CurveSamples::new(z, s).unwrap();
        prop_assert_eq!(curve_from_csv(&curve_to_csv(&c)).unwrap(), c);
    }

    #[test]
    fn fields_roundtrip(
        half in 8usize..16,
        levels in 6usize..9,
        sub in 1usize..3,
        upper in any::<bool>(),
        seed in prop::collection::vec(complex(), 1..8),
    ) {
        let x = make_line_grid(3.0, 2 * half + 1, Spacing::Uniform).unwrap();
        let o = if upper { Orientation::Upper } else { Orientation::Lower };
        let grid = Arc::new(HalfPlaneGrid::dyadic(x, 1.0, levels, sub, o).unwrap());
        let values = (0..grid.len()).map(|i| seed[i % seed.len()] + i as f64).collect();
        let f = HalfPlaneField::new(grid, values).unwrap();
        let back = field_from_csv(&field_to_csv(&f)).unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        prop_assert_eq!(back.values(), f.values());
    }

    #[test]
    fn configs_roundtrip(
        amp in -2.0f64..2.0,
        ladder in prop::collection::vec(1e-4f64..1.0, 1..6),
        nodes in 257usize..5000,
        trace in 1e-8f64..1.0,
        seeds in prop::collection::vec(any::<u64>(), 1..4),
    ) {
        let mut cfg = ExperimentConfig {
            base: Member::new(Profile::TwoBump, amp),
            epsilon_ladder: ladder,
            seeds,
            grid: GridSpec { nodes, ..GridSpec::default() },
            ..ExperimentConfig::default()
        };
        cfg.tolerances.trace_gap = trace;
        let back: ExperimentConfig = from_json(&to_json(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back.hash(), cfg.hash());
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn reports_roundtrip(values in prop::collection::vec(finite(), 1..6), pass in any::<bool>()) {
        let mut c = Check::new("probe", pass);
        for (k, v) in values.iter().enumerate() {
            c = c.with(format!("value {k}"), *v);
        }
        let r = ExperimentReport::new("roundtrip", Provenance::of_config(&ExperimentConfig::default()), vec![c]);
        let text = to_json(&r).unwrap();
        let back: ExperimentReport = from_json(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(to_json(&back).unwrap(), text);
    }
}

#[test]
fn support_metadata_survives() {
    let g = fixtures::default_line_grid();
    let f = Member::new(Profile::Bump, 0.3).sample(&g).unwrap();
    let text = function_to_csv(&f);
    assert!(text.starts_with("# support="));
    assert_eq!(function_from_csv(&text).unwrap(), f);
}

fn parse_line(e: Error) -> usize {
    match e {
        Error::Parse { line, .. } => line,
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let missing = "x,re,im\n0,1,0\n1,2\n";
    assert_eq!(parse_line(function_from_csv(missing).unwrap_err()), 3);
    let bad = "# support=0\nx,re,im\n0,1,0\n1,nope,0\n";
    assert_eq!(parse_line(function_from_csv(bad).unwrap_err()), 4);
    let header = "x,value\n0,1\n";
    assert_eq!(parse_line(function_from_csv(header).unwrap_err()), 1);
    let meta = "# support=wide\nx,re,im\n0,0,0\n1,0,0\n";
    assert_eq!(parse_line(function_from_csv(meta).unwrap_err()), 1);
    let unsorted = "s,re,im\n0,0,0\n-1,1,0\n";
    assert!(matches!(curve_from_csv(unsorted), Err(Error::Parse { .. })));
    let empty = "";
    assert!(matches!(function_from_csv(empty), Err(Error::Parse { .. })));
}

#[test]
fn json_errors_carry_line_numbers() {
    let text = "{\n  \"trace_gap\": 1e-3,\n  \"bogus\": 1\n}";
    assert_eq!(parse_line(from_json::<Tolerances>(text).unwrap_err()), 3);
    assert!(from_json::<Tolerances>("{}").is_ok());
}

#[test]
fn non_finite_values_become_null() {
    let c = Check::new("x", true).with("ratio", f64::INFINITY);
    let text = to_json(&c).unwrap();
    assert!(text.contains("null"));
}

#[test]
fn atomic_write_replaces_whole_files() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("out.json");
    write_atomic(&p, b"first").unwrap();
    write_atomic(&p, b"second").unwrap();
    assert_eq!(read_text(&p).unwrap(), "second");
    let leftovers: Vec<_> = std::fs::read_dir(d.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
    assert!(matches!(read_text(&d.path().join("absent")), Err(Error::Io(_))));
}

#[test]
fn series_have_one_column_per_name() {
    let text = series_to_csv(&["eps", "d"], &[vec![0.1, 0.5], vec![0.05, 0.25]]);
    let t = Table::parse(&text, &["eps", "d"]).unwrap();
    assert_eq!(t.rows.len(), 2);
    assert_eq!(t.rows[1], vec![0.05, 0.25]);
}
