//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid needs at least {min} samples per side, got {n}")]
    GridTooSmall { n: usize, min: usize },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} = {value} is outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("fields live on different grids ({a_n}x{a_n}, extent {a_extent} vs {b_n}x{b_n}, extent {b_extent})")]
    GridMismatch {
        a_n: usize,
        a_extent: f64,
        b_n: usize,
        b_extent: f64,
    },

    #[error("field samples must all be finite")]
    NonFiniteSamples,

    #[error("sample count {got} does not match the grid ({expected} samples)")]
    SampleCountMismatch { got: usize, expected: usize },

    #[error("{name} must have length {expected}, got {got}")]
    LengthMismatch {
        name: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("integration loop leaves the grid (center ({cx}, {cy}), radius {radius})")]
    LoopOutsideGrid { cx: f64, cy: f64, radius: f64 },

    #[error("field amplitude on the loop falls below the floor; its phase is undefined")]
    AmplitudeBelowFloor,

    #[error("grid cannot represent the requested spatial frequencies: {detail}")]
    NyquistViolation { detail: String },

    #[error("amplitude vector must contain at least one nonzero entry")]
    AllZeroAmplitudes,

    #[error("projection weights sum to {total}, but a mode filter cannot exceed unit response")]
    ProjectorOverUnity { total: f64 },

    #[error("projector truncation {projector} is smaller than the state truncation {state}")]
    TruncationMismatch { projector: u32, state: u32 },

    #[error("raster extends beyond the field grid (reach {reach} vs usable half extent {usable})")]
    RasterOutsideGrid { reach: f64, usable: f64 },

    #[error("visibility is undefined when both rates are zero")]
    ZeroContrast,
}

pub type Result<T> = std::result::Result<T, Error>;
