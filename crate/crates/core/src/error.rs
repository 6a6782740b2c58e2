use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the library.
///
/// Verdict-style outcomes (a matrix is *not* a member, a certificate was
/// not found) are reported through return values, not through this type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (max |M - M*| = {deviation:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (lambda_min = {lambda_min:.6e}, tol = {tolerance:.3e})")]
    NotPsd { lambda_min: f64, tolerance: f64 },

    #[error("matrix is not positive definite (lambda_min = {lambda_min:.6e})")]
    NotPositiveDefinite { lambda_min: f64 },

    #[error("Stein factor H is not positive definite (lambda_min = {lambda_min:.6e})")]
    HNotPositiveDefinite { lambda_min: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("matrix lies inside the closed unit ball (spectral norm {norm:.6e} <= 1)")]
    NotOutside { norm: f64 },

    #[error("isometry tuple is invalid (defect {defect:.3e})")]
    InvalidIsometry { defect: f64 },

    #[error("matrix is not an isometry (defect {defect:.3e})")]
    NotIsometry { defect: f64 },

    #[error("z = {z} is within the exclusion radius of the pole {pole}")]
    NearPole { z: Complex64, pole: Complex64 },

    #[error("state matrix is not strictly stable (spectral radius {spectral_radius:.6e})")]
    UnstableA { spectral_radius: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("index pair ({p}, {q}) is invalid for order {order}")]
    Index { p: usize, q: usize, order: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("self-check failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
