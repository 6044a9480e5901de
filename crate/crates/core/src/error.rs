use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid angle: {0}")]
    InvalidAngle(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("gap condition fails at factor {index}: (r_next - M)/M = {ratio} < {required}")]
    GapCondition { index: usize, ratio: f64, required: f64 },

    #[error("density is negative ({value}) at grid point {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("density mean is {mean}, expected 1")]
    MeanNotOne { mean: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("requested half-width {requested} exceeds the configured maximum {max}")]
    TableTooLarge { requested: usize, max: usize },

    #[error("angle arithmetic overflowed")]
    AngleOverflow,

    #[error("ratio undefined (not strictly aperiodic at n = {n})")]
    RatioUndefined { n: i64 },

    #[error("series diverges at frequency {frequency}")]
    SeriesDiverges { frequency: i64 },

    #[error("function is not centered (a_0 = {re} + {im}i)")]
    NotCentered { re: f64, im: f64 },

    #[error("coefficients a_k must tend to 0")]
    CoefficientsNotDecaying,

    #[error("truncation stage {stage} is too low to resolve {cells} cells; stage {required} is required")]
    StageTooLow { stage: usize, required: usize, cells: usize },

    #[error("measure is not samplable: {0}")]
    Unsamplable(String),

    #[error("frequency {n} is outside the table window")]
    OutsideWindow { n: i64 },
}
