use thiserror::Error;

use crate::hilbert::BasisTag;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis mismatch: expected {expected:?}, found {found:?}")]
    BasisMismatch { expected: BasisTag, found: BasisTag },

    #[error("index ({row}, {col}) out of range for dimension {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("invalid oscillator frequency {0}: must be positive and finite")]
    InvalidFrequency(f64),

    #[error("state is not normalized: norm² = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("time {t} is not stroboscopic: {steps} grid steps (off by {offset})")]
    NonStroboscopic { t: f64, steps: f64, offset: f64 },

    #[error("{what}: argument {arg} outside domain ({domain})")]
    Domain {
        what: &'static str,
        arg: String,
        domain: &'static str,
    },

    #[error(
        "series did not reach tolerance {tol:e} within {max_terms} terms (best estimate {estimate}, error ~{error:e})"
    )]
    Convergence {
        tol: f64,
        max_terms: usize,
        estimate: num_complex::Complex64,
        error: f64,
    },

    #[error("phi = {phi} is within {guard} of the singularity at 0 mod 2π")]
    NearSingularity { phi: f64, guard: f64 },

    #[error("pole of map at z = -1")]
    Pole,

    #[error("y = {0} lies on the branch cut (real y > 1); specify the side of approach")]
    OnBranchCut(f64),

    #[error("invalid sheet index {0}: must be 1 or 2")]
    InvalidSheet(u8),

    #[error("invalid series accuracy: abs_tol = {abs_tol:e}, max_terms = {max_terms}")]
    InvalidAccuracy { abs_tol: f64, max_terms: usize },

    #[error("root finder did not converge for degree {degree} after {iterations} iterations")]
    RootFinder { degree: usize, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
