use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension out of range: n = {0} (supported: 2..=6)")]
    DimensionOutOfRange(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("norm undefined at discrete spectral bottom (tau = {tau} < 0 with weight on a clamped eigenvalue)")]
    SpectralBottom { tau: f64 },

    #[error("configuration rejected: {0}")]
    Config(String),

    #[error("quadrature failed to converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("point outside the open cone: t - t0 = {t_rel}, |x| = {x_abs}")]
    OutsideCone { t_rel: f64, x_abs: f64 },

    #[error("requested slice exits the simulated region: {0}")]
    SliceOutOfRange(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
