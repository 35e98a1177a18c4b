use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("system mismatch: `{left}` vs `{right}`")]
    SystemMismatch { left: String, right: String },

    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid theory: {0}")]
    InvalidTheory(String),

    #[error("reversible group of `{system}` is not closed: {reason}")]
    GroupNotClosed { system: String, reason: String },

    #[error("invalid behavior: {0}")]
    InvalidBehavior(String),

    #[error("vector is outside the image of the behavior embedding: {0}")]
    NotInEmbedding(String),

    #[error("size cap exceeded: {what} = {value}, maximum {max}")]
    SizeCap {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("register mismatch: circuit uses {circuit} ports, advice provides {advice}")]
    RegisterMismatch { circuit: usize, advice: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
