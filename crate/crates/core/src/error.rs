use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator is not Hermitian (max |A - A^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid value for `{key}`: {reason}")]
    InvalidConfig { key: &'static str, reason: String },

    #[error("trace drift {residual:e} at t = {time} exceeds tolerance {tolerance:e}; reduce dt")]
    TraceDrift { time: f64, residual: f64, tolerance: f64 },

    #[error("Hermiticity drift {residual:e} at t = {time} exceeds tolerance {tolerance:e}; reduce dt")]
    HermiticityDrift { time: f64, residual: f64, tolerance: f64 },

    #[error("positivity lost at t = {time}: minimum eigenvalue {min_eigenvalue:e}")]
    PositivityLoss { time: f64, min_eigenvalue: f64 },

    #[error("steady state is not unique (pivot ratio {pivot_ratio:e}); add dissipation or reduce the model")]
    RankDeficient { pivot_ratio: f64 },

    #[error("cell ({row}, {col}): {source}")]
    Cell {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
