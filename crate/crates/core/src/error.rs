use thiserror::Error;

use crate::expr::{Assignment, EvalError, ParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid jet space: {0}")]
    Space(String),
    #[error("invalid curve: {0}")]
    Curve(String),
    #[error("invalid embedding: {0}")]
    Embedding(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("source form has order {found}, at most {max} is supported here")]
    OrderTooHigh { found: u32, max: u32 },
    #[error("component {sigma} is not affine in the acceleration of {nu} (second partial {value} at {at})")]
    Nonlinear {
        sigma: usize,
        nu: usize,
        at: Assignment,
        value: f64,
    },
    #[error("coefficients depend explicitly on the base variable")]
    TimeDependent,
    #[error("expected a one-dimensional embedding, found dimension {0}")]
    NotOneDimensional(usize),
    #[error("unable to sample: {attempts} consecutive draws hit domain errors")]
    UnableToSample { attempts: usize },
    #[error("internal inconsistency: {0}")]
    RouteDisagreement(String),
    #[error("unknown catalog entry `{0}` (see `varsub catalog`)")]
    UnknownCatalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
