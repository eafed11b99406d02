use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-unit divisor")]
    NonUnitDivisor,
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("non-normalized argument: {0}")]
    NonNormalized(String),
    #[error("non-generic regulator: repeated value {0}")]
    NonGenericRegulator(String),
    #[error("limit does not exist: pole of order {pole_order} at exponent {exponent:?}")]
    LimitDoesNotExist { exponent: Vec<u32>, pole_order: i32 },
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("insufficient truncation order: {0}")]
    InsufficientOrder(String),
    #[error("no exact solution: {0}")]
    NoSolution(String),
    #[error("no PF structure")]
    NoPfStructure,
    #[error("degenerate torus data: {0}")]
    DegenerateTorus(String),
    #[error("Birkhoff breakdown: {0}")]
    BirkhoffBreakdown(String),
    #[error("quadratic identity violated: {0}")]
    QuadraticIdentity(String),
    #[error("not asymptotically normalizable: {0}")]
    NotNormalizable(String),
    #[error("degenerate branch at order {0}")]
    DegenerateBranch(usize),
    #[error("Hodge integral not provided: {0}")]
    MissingHodge(String),
    #[error("insufficient z-depth: need {need}, have {have}")]
    InsufficientZDepth { need: usize, have: usize },
    #[error("outside the stable range: {0}")]
    Unstable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
