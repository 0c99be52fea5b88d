//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `((1/4π²) ∫ |ξ| |û(ξ)|² dξ)^{1/2}` with `û(ξ) = ∫ u(x) e^{-ixξ} dx`, both
/// integrals by composite Simpson on `[-l, l]` and `[0, xi_max]`.
pub fn fourier_h12(u: impl Fn(f64) -> f64, l: f64, xi_max: f64) -> f64 {
    let m = 8000;
    let h = 2.0 * l / m as f64;
    let samples: Vec<(f64, f64)> = (0..=m)
        .map(|i| {
            let x = -l + i as f64 * h;
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            (x, w * h / 3.0 * u(x))
        })
        .collect();
    let k = 4000;
    let dk = xi_max / k as f64;
    let mut acc = 0.0;
    for j in 0..=k {
        let xi = j as f64 * dk;
        let (mut re, mut im) = (0.0, 0.0);
        for &(x, wu) in &samples {
            let (s, c) = (x * xi).sin_cos();
            re += wu * c;
            im -= wu * s;
        }
        let w = if j == 0 || j == k { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * dk / 3.0 * xi * (re * re + im * im);
    }
    // both signs of ξ
    (2.0 * acc / (4.0 * PI * PI)).sqrt()
}

/// Largest mean oscillation of `u` over intervals of lengths `2l 2^{-k/r}`
/// starting on a lattice of `length / r`, each mean by a 2001-point
/// trapezoid rule.
pub fn dense_bmo(u: impl Fn(f64) -> f64, l: f64, min_len: f64, r: usize) -> f64 {
    let mut best: f64 = 0.0;
    let mut k = 0;
    loop {
        let len = 2.0 * l * 2f64.powf(-(k as f64) / r as f64);
        if len < min_len {
            break;
        }
        let step = len / r as f64;
        let mut a = -l;
        while a + len <= l + 1e-12 {
            best = best.max(mean_oscillation(&u, a, a + len));
            a += step;
        }
        k += 1;
    }
    best
}

pub fn mean_oscillation(u: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 2000;
    let h = (b - a) / m as f64;
    let vals: Vec<f64> = (0..=m).map(|i| u(a + i as f64 * h)).collect();
    let trap = |g: &dyn Fn(f64) -> f64| {
        let mut s = 0.5 * (g(vals[0]) + g(vals[m]));
        for v in &vals[1..m] {
            s += g(*v);
        }
        s * h / (b - a)
    };
    let mean = trap(&|v| v);
    trap(&|v| (v - mean).abs())
}

/// Smooth test functions with closed forms.
pub fn smooth_fixtures() -> Vec<(&'static str, fn(f64) -> f64)> {
    vec![
        ("gaussian", |x| (-x * x).exp()),
        ("narrow gaussian", |x| (-4.0 * x * x).exp()),
        ("odd gaussian", |x| x * (-x * x).exp()),
        ("sech", |x| 1.0 / x.cosh()),
        ("modulated gaussian", |x| (-x * x).exp() * (2.0 * x).cos()),
    ]
}
