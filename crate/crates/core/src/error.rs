use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func}: argument {arg:e} outside the supported domain")]
    Domain { func: &'static str, arg: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors must have at least one component")]
    EmptyVector,
    #[error("stage count {0} out of range 1..=30")]
    InvalidStages(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("reference component {0} is zero")]
    ZeroReference(usize),
    #[error("breakdown at t = {t:e}: step {h:e} rejected after {halvings} halvings")]
    Breakdown { t: f64, h: f64, halvings: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
