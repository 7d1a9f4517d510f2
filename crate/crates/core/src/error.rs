use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("size limit exceeded: {requested} > {limit}")]
    SizeLimit { requested: usize, limit: usize },

    #[error("matrix is not Hermitian (max |m - m^H| = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("state is not an X state (off-pattern mass {mass:.3e})")]
    NotXState { mass: f64 },

    #[error("no closed form for this model and initial family: {0}")]
    UnsupportedAnalytic(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock truncation did not converge up to cutoff {cutoff} (last delta {delta:.3e})")]
    TruncationFailure { cutoff: usize, delta: f64 },
}
