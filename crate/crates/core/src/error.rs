use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{operation}: estimated error {achieved:e} exceeds tolerance {requested:e}")]
    Accuracy { operation: &'static str, achieved: f64, requested: f64 },
    #[error("{0}: singular at t = 0")]
    Singular(&'static str),
    #[error("{operation}: denominator {value:e} is not safely positive")]
    Denominator { operation: &'static str, value: f64 },
}
