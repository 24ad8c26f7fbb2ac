use thiserror::Error;

use crate::exact::ConvergenceReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("eigensolver did not converge within {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("truncation did not converge at g = {g}: final nmax {}", report.final_nmax)]
    TruncationNoConvergence { g: f64, report: ConvergenceReport },

    #[error("reference method {0} missing from sweep table")]
    MissingReference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
