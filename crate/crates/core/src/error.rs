use thiserror::Error;

use crate::scalar::BaseField;

/// Errors raised by the exact arithmetic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("base field mismatch: {left:?} vs {right:?}")]
    FieldMismatch { left: BaseField, right: BaseField },
    #[error("ring context mismatch: {0}")]
    ContextMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} has no real specialization")]
    NoSpecialization(BaseField),
    #[error("expected a unit monomial, got `{0}`")]
    NotAUnit(String),
    #[error("vector length {got} does not match ring dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("evaluation at a point with a zero coordinate (index {0})")]
    ZeroCoordinate(usize),
    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("cannot parse polynomial text: {0}")]
    Parse(String),
}

/// Errors raised while reading or validating fan data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FanError {
    #[error("malformed fan document: {0}")]
    Malformed(String),
    #[error("fan needs at least n = {n} rays, got {m}")]
    TooFewRays { n: usize, m: usize },
    #[error("ray {index} has length {got}, expected {expected}")]
    RayLength { index: usize, expected: usize, got: usize },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("no {n} rays form an integral basis (first block has det {det})")]
    NotIntegralBasis { n: usize, det: i64 },
    #[error("basepoint is not interior: <u, v_{index}> - lambda_{index} = {slack} <= 0")]
    NotInterior { index: usize, slack: String },
    #[error("offset a_{index} = {value} is outside (0, 1)")]
    OffsetOutOfRange { index: usize, value: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
