use thiserror::Error;

/// Errors produced by validation and the numerical operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square or has dim 0")]
    NotSquare,
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not hermitean: defect {defect:e} exceeds tolerance {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("matrix is not idempotent: |M^2 - M| = {defect:e} exceeds tolerance {tol:e}")]
    NotIdempotent { defect: f64, tol: f64 },
    #[error("eigenvalue {eigenvalue} is farther than {tol:e} from {{0, 1}}")]
    SpectrumOutOfBand { eigenvalue: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:e}")]
    NotPositive { min_eig: f64 },
    #[error("trace {trace} deviates from 1 by more than {tol:e}")]
    TraceNotOne { trace: f64, tol: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eigendecomposition backend failed to converge")]
    ConvergenceFailure,
    #[error("eigenvalue {eigenvalue} is ambiguous for band around {target} of half-width {band:e}")]
    BandAmbiguity {
        eigenvalue: f64,
        target: f64,
        band: f64,
    },
    #[error("decomposition reconstruction error {defect:e} exceeds {tol:e}")]
    DecompositionInconsistent { defect: f64, tol: f64 },
    #[error("iterated limit did not converge within {iterations} iterations")]
    LimitNotConverged { iterations: usize },
    #[error("conditioning on a null event: tr(rho q) = {weight:e}")]
    ConditionOnNullEvent { weight: f64 },
    #[error("invalid projective resolution: {0}")]
    ResolutionInvalid(String),
    #[error("credal set contains no distributions")]
    EmptyCredalSet,
    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),
    #[error("probability value {value} outside [0, 1] beyond rounding slack")]
    IntervalOutOfRange { value: f64 },
    #[error("tolerances must be strictly positive")]
    InvalidTolerance,
    #[error("event space size {n} exceeds the supported maximum {max}")]
    EventSpaceTooLarge { n: usize, max: usize },
    #[error("event mask {mask:#x} does not fit an event space of {n} outcomes")]
    EventOutOfSpace { mask: u32, n: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
