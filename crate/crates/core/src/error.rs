use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DropletError {
    #[error("non-finite integrand value at node {node} (w = {location})")]
    NonFiniteSample { node: usize, location: Complex64 },

    #[error("loop integral did not converge; last two estimates {previous} and {last}")]
    NoConvergence { previous: Complex64, last: Complex64 },

    #[error("function vanishes on the contour near {location} (|f| = {magnitude:e})")]
    ZeroOnContour { location: Complex64, magnitude: f64 },

    #[error("invalid bracket [{lo}, {hi}]: predicate({lo}) = {lo_value}, predicate({hi}) = {hi_value}")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        lo_value: bool,
        hi_value: bool,
    },

    #[error("degenerate (zero-length) segment at index {index}")]
    DegenerateSegment { index: usize },

    #[error("closed polyline needs at least 3 points")]
    TooFewPoints,

    #[error("{what} has a pole at {location}")]
    Pole { what: &'static str, location: Complex64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("closed form mismatch, max deviation {max_deviation:e}")]
    ClosedFormMismatch { max_deviation: f64 },

    #[error("degenerate boundary: phi' vanishes at nodes {nodes:?}")]
    DegenerateBoundary { nodes: Vec<usize> },

    #[error("curvature branch ambiguity at {location}: imaginary part {imaginary:e}")]
    BranchAmbiguity { location: Complex64, imaginary: f64 },

    #[error("loop around {center} would need radius below 1e-6")]
    LoopTooSmall { center: Complex64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("width formula disagrees with trace extent: formula {formula}, trace {trace}")]
    WidthMismatch { formula: f64, trace: f64 },

    #[error("zero search failed after {retries} jittered retries")]
    ZeroSearchFailed { retries: usize },
}

pub type Result<T> = std::result::Result<T, DropletError>;
