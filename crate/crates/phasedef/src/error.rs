use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chart domain violation: {0}")]
    ChartDomain(String),
    #[error("not real-representable: {0}")]
    NotRealRepresentable(String),
    #[error("outside chart U: I = {0}")]
    OutsideChart(f64),
    #[error("bivector is not decomposable: residual {0}")]
    NotDecomposable(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Structure(_) => "structure",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ChartDomain(_) => "chart_domain",
            Error::NotRealRepresentable(_) => "not_real_representable",
            Error::OutsideChart(_) => "outside_chart",
            Error::NotDecomposable(_) => "not_decomposable",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
