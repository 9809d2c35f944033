use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotiveError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value involves an odd power of L^(1/2)")]
    OddHalfPower,
    #[error("denominator vanishes at L = {0}")]
    PoleAtPrime(u64),
    #[error("denominator vanishes at L = {0}")]
    PoleAtPoint(String),
    #[error("denominator vanishes at L^(1/2) = -1")]
    PoleAtMinusOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series shapes differ: {0} vars / truncation {1} vs {2} vars / truncation {3}")]
    ShapeMismatch(usize, u32, usize, u32),
    #[error("plethystic exponential needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("plethystic logarithm needs constant term 1")]
    ConstantTermNotOne,
    #[error("closed-form term has zero numerator exponent")]
    ZeroNumeratorExponent,
    #[error("closed-form term has zero period")]
    ZeroPeriod,
    #[error("dimension vector has {0} entries, series has {1} variables")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown arrow '{0}'")]
    UnknownArrow(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("dimension vector has {0} entries, quiver has {1} vertices")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space of {space} assignments exceeds the cap of {cap}")]
    SearchSpaceTooLarge { space: u128, cap: u128 },
    #[error("parameter '{0}' is assigned zero")]
    ZeroParameter(String),
    #[error("parameter '{0}' has no assigned value")]
    MissingParameter(String),
    #[error("{0} is not a prime below 2^16")]
    NotPrime(u64),
    #[error("multiplicative order of zero is undefined")]
    ZeroHasNoOrder,
    #[error("coefficient denominator vanishes modulo {0}")]
    CoefficientPole(u64),
    #[error("designated map {0} is not an endomorphism")]
    NonSquare(String),
    #[error("matrix dimension {0} exceeds the supported maximum of {1}")]
    DimensionTooLarge(u32, usize),
    #[error("count overflowed 128 bits")]
    Overflow,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("branch mismatch: {0}")]
    BranchMismatch(String),
    #[error("model does not match the {0} family: {1}")]
    FamilyMismatch(String, String),
    #[error("truncation {0} is below |alpha| = {1}")]
    TruncationTooLow(u32, u32),
    #[error(transparent)]
    Motive(#[from] MotiveError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
