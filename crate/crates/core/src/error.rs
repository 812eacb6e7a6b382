use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("invalid frequency grid: {0}")]
    InvalidFrequencyGrid(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("evaluation point outside the closed right half plane: Re s = {0}")]
    LeftHalfPlane(f64),
    #[error("non-finite evaluation point")]
    NonFinitePoint,
    #[error("surjectivity failure: D = G(inf) is not of full row rank (sigma_min/sigma_max = {ratio:.3e})")]
    SurjectivityFailure { ratio: f64 },
    #[error("operator is not Hermitian (asymmetry {asymmetry:.3e} relative)")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("iteration budget exhausted after {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("solver residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("certification routes disagree: route A (lambda_min {lambda_a:.3e}) = {route_a}, route B (lambda_min T_R {lambda_tr:.3e}, Schur complement {lambda_schur:.3e}) = {route_b}")]
    RouteDisagreement {
        route_a: bool,
        route_b: bool,
        lambda_a: f64,
        lambda_tr: f64,
        lambda_schur: f64,
    },
    #[error("not right invertible: lambda_min = {lambda_min:.3e} (threshold {threshold:.3e})")]
    NotRightInvertible { lambda_min: f64, threshold: f64 },
    #[error("near-singular evaluation: condition number {0:.3e}")]
    NearSingular(f64),
    #[error("parameter must be strictly proper (Z(inf) = 0)")]
    NotStrictlyProper,
    #[error("not a solution: Bezout residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotASolution { residual: f64, tolerance: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// Errors caused by the caller's input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_)
                | Error::InvalidFrequencyGrid(_)
                | Error::InvalidKernel(_)
                | Error::DimensionMismatch(_)
                | Error::LeftHalfPlane(_)
                | Error::NonFinitePoint
                | Error::InvalidParameter(_)
                | Error::Io(_)
                | Error::Csv(_)
                | Error::Json(_)
                | Error::Format(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
