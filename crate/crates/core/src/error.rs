use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("kernel scale error at x={x}, y={y}: |phi_y * z'| = {denominator} below {floor}")]
    KernelScale {
        x: f64,
        y: f64,
        denominator: f64,
        floor: f64,
    },
    #[error("degenerate Jacobian: min |d rho| = {0}")]
    DegenerateJacobian(f64),
    #[error("not a Beltrami coefficient: sup |mu| = {0}")]
    NotBeltrami(f64),
    #[error("bi-Lipschitz certificate failed: edge ratios in [{min_ratio}, {max_ratio}], min |d tau| = {min_jacobian}")]
    Certificate {
        min_ratio: f64,
        max_ratio: f64,
        min_jacobian: f64,
    },
    #[error("curve is not Jordan at resolution: {0}")]
    NotJordan(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("log unwrapping failed: {0}")]
    Unwrap(String),
    #[error("composition degeneracy: |denominator| = {0}")]
    Composition(f64),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
