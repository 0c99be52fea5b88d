//! Grids, sampled functions, quadrature and monotone-map algebra.

mod field;
mod grid;
mod maps;
mod sampled;

pub use field::HalfPlaneField;
pub use grid::{
    make_line_grid, HalfPlaneGrid, LineGrid, Orientation, Spacing, MIN_DYADIC_LEVELS,
    MIN_LINE_NODES,
};
pub use maps::{compose_maps, invert_monotone, MonotoneBoundaryMap};
pub use sampled::{cumulative_from, detect_support, integrate_line, SampledLineFunction};
