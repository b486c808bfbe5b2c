use thiserror::Error;

use crate::fock::Statistics;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis needs at least one mode")]
    NoModes,
    #[error("fermion basis limited to {max} modes, got {requested}")]
    TooManyFermionModes { requested: usize, max: usize },
    #[error("boson cutoff must be at least 2, got {0}")]
    InvalidCutoff(usize),
    #[error("basis dimension {dimension} exceeds ceiling {ceiling}")]
    DimensionOverflow { dimension: u128, ceiling: usize },
    #[error("mode {mode} out of range for {num_modes} modes")]
    ModeOutOfRange { mode: usize, num_modes: usize },
    #[error("occupation {occupation} of mode {mode} not representable in this basis")]
    InvalidOccupation { mode: usize, occupation: u32 },
    #[error("state belongs to a different basis")]
    BasisMismatch,
    #[error("statistics mismatch: {left:?} vs {right:?}")]
    StatisticsMismatch { left: Statistics, right: Statistics },
    #[error("exponential series did not converge after {terms} terms (residual {residual:e})")]
    NonConvergence { terms: usize, residual: f64 },
    #[error("cutoff {cutoff} too small: tail weight {tail:e} exceeds {limit:e}")]
    CutoffTooSmall { cutoff: usize, tail: f64, limit: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("zero intensity at x = {x} (Γ(x,x) = {intensity:e})")]
    ZeroIntensity { x: f64, intensity: f64 },
    #[error("{what} requested for size {size}, limit is {limit}")]
    SizeGuard { what: &'static str, size: usize, limit: usize },
    #[error("invalid coupler: {0}")]
    InvalidCoupler(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("fixture parse error: {0}")]
    Fixture(String),
}
