//! Calibrated constants, frozen from the calibration run
//! (`cargo run --release --example calibrate`). Measured extremes are
//! noted next to each bound.

/// Exponential-mean bound `C1 b / (C2 - b)` for the John–Nirenberg probe
/// (measured `C1` 0.24 at `C2 = 0.5`).
pub const JN_C1: f64 = 4.0;
pub const JN_C2: f64 = 0.5;

/// `|(1/2y) ∫_{x-y}^{x+y} u - P[u](x+iy)| ≤ K ‖u‖_BMO` (measured 0.94).
pub const K_POISSON_GAP: f64 = 1.6;
/// `‖u‖_BMO ≤ K ‖u‖_{H^{1/2}}` (measured 0.90).
pub const K_BMO_H12: f64 = 1.2;

/// `|R_y(e^u)| / e^{Re R_y(u)}` lies in `[1/K, K]` when `‖u‖_BMO ≤ 0.05`
/// (measured within `[1, 1.0004]`).
pub const LEMMA31_BRACKET: f64 = 2.0;
/// `|R_y(u)(x) - u_I| ≤ K ‖u‖_BMO` (measured 0.27).
pub const K_MEAN_VALUE: f64 = 0.5;
/// `(1/|I|) ∫_I |e^{u - R_y(u)(x)} - 1| ≤ K ‖u‖_BMO` (measured 0.90).
pub const K_EXP_MEAN: f64 = 1.5;

/// `sup |μ| ≤ K ‖u‖_{H^{1/2}}` for the base extension (measured 0.99).
pub const K_SUP_SLOPE: f64 = 1.5;
/// `|μ|² ≤ K (1/y) ∫_{-y}^{y} |u(x+t) - u(x)|² dt` for the base
/// extension (measured 0.63).
pub const K_LEMMA61: f64 = 1.0;
/// Beltrami values below this are quadrature noise.
pub const MU_NOISE_FLOOR: f64 = 1e-9;

/// `‖b∘h₁⁻¹‖ / ‖b‖` lies in `[1/K, K]` on the suite (measured 0.99 to 1.01).
pub const THM41_BRACKET: f64 = 1.5;
