use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrowName(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("quiver has a directed cycle or loop")]
    DirectedCycle,
    #[error("quiver is not connected")]
    Disconnected,
    #[error("arrow name `{0}` is reserved (names ending in ' denote reverse arrows)")]
    ReservedArrowName(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("quiver is not of Dynkin type")]
    NotDynkin,
    #[error("quiver is not of extended Dynkin type")]
    NotExtendedDynkin,
    #[error("degenerate case: {0}")]
    DegenerateRank(String),
    #[error("ladder broken at step {step}: translate of L_{} is not contained in the successors of L_{}", .step - 2, .step - 1)]
    LadderBroken { step: usize },
    #[error("wrong quiver shape: {0}")]
    WrongQuiverShape(String),
    #[error("weight is not sincere (entry {0} is zero)")]
    NonSincereWeight(usize),
    #[error("element is not homogeneous: {0}")]
    NonHomogeneous(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("invalid eigenvalue: {0}")]
    InvalidLambda(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
