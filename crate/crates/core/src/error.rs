use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("kernel under-resolved: epsilon {epsilon} is smaller than grid spacing {dx}")]
    Resolution { epsilon: f64, dx: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("picard iteration did not converge within {iterations} iterations at t = {time} (last change {change:e})")]
    PicardDivergence {
        iterations: usize,
        time: f64,
        change: f64,
    },

    #[error("CFL violation: dt = {dt:e} exceeds the admissible {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("grid too coarse: breakpoints {left} and {right} are fewer than 4 cells apart")]
    BreakpointsTooClose { left: f64, right: f64 },

    #[error("flux is not convex on [{lo}, {hi}]")]
    NonConvexFlux { lo: f64, hi: f64 },

    #[error("initial data is not piecewise constant: {0}")]
    NotPiecewiseConstant(String),

    #[error("no crossing of level {level} at t = {time}")]
    NoCrossing { level: f64, time: f64 },

    #[error("{count} crossings of level {level} at t = {time}")]
    MultipleCrossings { level: f64, time: f64, count: usize },

    #[error("expression error at column {column}: {message}")]
    Expression { column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
