use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("cell key {key} out of range for a grid of {len} cells")]
    KeyOutOfRange { key: usize, len: usize },

    #[error("coordinate {coord} out of range on axis {axis} (extent {extent})")]
    CoordOutOfRange {
        axis: usize,
        coord: usize,
        extent: usize,
    },

    #[error("cell {0} is not a vertex")]
    NotAVertex(usize),

    #[error("direction is not generic: coordinate {axis} is {value}")]
    GenericityViolation { axis: usize, value: f64 },

    #[error("expected {expected} coordinates, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid sampling range [{a}, {b}] with {count} points")]
    InvalidRange { a: f64, b: f64, count: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel primitive undefined at t = {0}")]
    KernelDomain(f64),
}
