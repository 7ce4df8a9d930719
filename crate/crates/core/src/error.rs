use thiserror::Error;

use crate::funcdsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Young function: {0}")]
    InvalidFunction(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("truncation a = {a} must satisfy 0 < a <= b_phi1 = {b}")]
    Truncation { a: f64, b: f64 },

    #[error("invalid measure space: {0}")]
    InvalidSpace(String),

    #[error("invalid simple function: {0}")]
    InvalidSimpleFunction(String),

    #[error("no threshold t_a gives ||chi_A|| <= {requested}; the best achievable bound is {achievable}")]
    Unachievable { requested: f64, achievable: f64 },

    #[error("witness level {level} has an infinite truncated conjugate")]
    WitnessUnbounded { level: f64 },

    #[error("table line {line}: {message}")]
    Table { line: usize, message: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
