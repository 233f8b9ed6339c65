use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty shift: the presentation carries no infinite path")]
    EmptyShift,

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),

    #[error("word {0:?} is not admissible here")]
    NotAdmissible(String),

    #[error("point {0} is not admissible in the presentation")]
    PointNotAdmissible(String),

    #[error("matrix has a zero row (row {0})")]
    ZeroRow(usize),

    #[error("vertex shift requires a 0-1 matrix, entry at ({0},{1}) is {2}")]
    NotZeroOne(usize, usize, u64),

    #[error("alphabets do not match: {0}")]
    AlphabetMismatch(String),

    #[error("substitution rules are ambiguous: {0}")]
    AmbiguousRules(String),

    #[error("map exception point {0} is not detectable with bounded lookahead")]
    ExceptionNotSynchronizing(String),

    #[error("transducer would starve on input cycle {0:?}")]
    Starvation(String),

    #[error("image word {0:?} is not admissible in the codomain")]
    ImageNotAdmissible(String),

    #[error("cylinder function depth {0} exceeds the supported bound {1}")]
    DepthOverflow(usize, usize),

    #[error("groupoid element is inconsistent: {0}")]
    BadGroupoidElement(String),

    #[error("lift is not well defined: {0}")]
    LiftNotWellDefined(String),

    #[error("roof function must be at least 1 everywhere (violated on {0:?})")]
    RoofNotPositive(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
