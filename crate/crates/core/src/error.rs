use thiserror::Error;

/// Mathematical-domain errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid geometry n={n} m={m} s={s}: n and m must be positive")]
    InvalidGeometry { n: usize, m: usize, s: usize },
    #[error("geometry mismatch")]
    GeometryMismatch,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("density is not homogeneous in b (degrees {0:?})")]
    NotHomogeneous(Vec<usize>),
    #[error("operation needs a multivector of degree at least 1")]
    DegreeZero,
    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("covector slot p{0} is already in use")]
    SlotCollision(u32),
    #[error("covector slot p{0} given more than once")]
    DuplicateSlot(u32),
    #[error("expected {expected} covector arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("need {needed} free covector slots but only {available} are available")]
    SlotsExhausted { needed: usize, available: usize },
    #[error("covector section must be free of odd variables")]
    OddSection,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("generator gave up after {0} retries")]
    RetryExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
