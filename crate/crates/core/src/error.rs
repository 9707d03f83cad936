use thiserror::Error;

/// Errors raised by the numerical and state-model layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NotHermitian: max |H - H^dagger| = {residual:e} exceeds tolerance {tol:e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("NotUnitTrace: |tr(rho) - 1| = {residual:e} exceeds tolerance {tol:e}")]
    NotUnitTrace { residual: f64, tol: f64 },

    #[error("NotPSD: minimum eigenvalue {min_eigenvalue:e} is below -{tol:e}")]
    NotPSD { min_eigenvalue: f64, tol: f64 },

    #[error("NotUnitary: max |U^dagger U - E| = {residual:e} exceeds tolerance {tol:e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("NonFinite: matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("NoConvergence: {routine} did not converge within {sweeps} sweeps")]
    NoConvergence {
        routine: &'static str,
        sweeps: usize,
    },

    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),

    #[error("BadLength: expected {expected}, got {got}")]
    BadLength { expected: usize, got: usize },

    #[error("BadCut: cut {cut} must satisfy 1 <= cut < {parties}")]
    BadCut { cut: usize, parties: usize },

    #[error("BadShape: {0}")]
    BadShape(String),

    #[error("TooLarge: hypermatrix would have {entries} entries (limit {limit})")]
    TooLarge { entries: u128, limit: u128 },

    #[error("UnsupportedFormat: {0}")]
    UnsupportedFormat(String),

    #[error("NotBipartite: state has {parties} subsystems")]
    NotBipartite { parties: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
