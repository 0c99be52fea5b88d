use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Kernels supported on [-1, 1] built from the bump `φ = c exp(-1/(1-x²))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelSpec {
    /// Even, unit mass.
    Phi,
    /// `-φ'`: odd, zero mass, first moment one.
    PsiOdd,
    /// `½((1 - ix) φ)'`: zero mass, complex.
    PsiHalf,
    /// `-x φ`: zero mass.
    Alpha,
}

impl KernelSpec {
    pub fn half_width(self) -> f64 {
        1.0
    }
}

fn bump(x: f64) -> f64 {
    let q = 1.0 - x * x;
    if q <= 0.0 {
        0.0
    } else {
        (-1.0 / q).exp()
    }
}

/// Normalizing constant of the bump.
pub fn phi_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        // trapezoid is spectrally accurate for this flat-ended integrand
        let m = 1 << 16;
        let h = 2.0 / m as f64;
        let s: f64 = (1..m).map(|i| bump(-1.0 + h * i as f64)).sum();
        1.0 / (s * h)
    })
}

pub fn phi(x: f64) -> f64 {
    phi_constant() * bump(x)
}

pub fn phi_prime(x: f64) -> f64 {
    let q = 1.0 - x * x;
    if q <= 0.0 {
        0.0
    } else {
        phi(x) * (-2.0 * x / (q * q))
    }
}

pub fn phi_second(x: f64) -> f64 {
    let q = 1.0 - x * x;
    if q <= 0.0 {
        return 0.0;
    }
    let g1 = -2.0 * x / (q * q);
    let g2 = -2.0 / (q * q) - 8.0 * x * x / (q * q * q);
    phi(x) * (g1 * g1 + g2)
}

/// `½((1 - iσx) φ)'` for orientation sign `σ`.
pub fn psi_half_signed(x: f64, sigma: f64) -> Complex64 {
    let p = phi(x);
    let dp = phi_prime(x);
    Complex64::new(0.5 * dp, -0.5 * sigma * (p + x * dp))
}

pub fn kernel_eval(spec: KernelSpec, x: f64) -> Complex64 {
    if x.abs() >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    match spec {
        KernelSpec::Phi => Complex64::new(phi(x), 0.0),
        KernelSpec::PsiOdd => Complex64::new(-phi_prime(x), 0.0),
        KernelSpec::PsiHalf => psi_half_signed(x, 1.0),
        KernelSpec::Alpha => Complex64::new(-x * phi(x), 0.0),
    }
}

/// Real kernel profiles used when assembling convolutions and their exact
/// derivatives in x and in the scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Profile {
    Phi,
    PhiPrime,
    /// `(xφ)'`
    XPhiPrime,
    /// `-xφ`
    Alpha,
    /// `-φ'`
    PsiOdd,
    /// `xφ'`, that is `-x ψ`
    NegXPsi,
}

impl Profile {
    pub(crate) fn eval(self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        match self {
            Profile::Phi => phi(x),
            Profile::PhiPrime => phi_prime(x),
            Profile::XPhiPrime => phi(x) + x * phi_prime(x),
            Profile::Alpha => -x * phi(x),
            Profile::PsiOdd => -phi_prime(x),
            Profile::NegXPsi => x * phi_prime(x),
        }
    }
}
