//! Numerics for Weil-Petersson curves through infinity: curves built from
//! tangent angles, the Semmes-type quasiconformal extensions, conformal
//! welding by a geodesic zipper, and experiment drivers that check the
//! characterizations and continuity statements on sampled data.

pub mod constants;
pub mod curve;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod io;
pub mod lab;
pub mod numerics;
pub mod par;
pub mod spaces;
pub mod welding;

pub use error::{Error, Result};
pub use num_complex::Complex64;
