use thiserror::Error;

/// Errors raised while constructing fields or manipulating their elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("argument `{name}` = {value} is not square-free")]
    NotSquareFree { name: &'static str, value: i64 },
    #[error("arguments `m` and `n` must be distinct (both are {0})")]
    NotDistinct(i64),
    #[error("argument `{name}` = {value} is out of range (need 1 < {name} <= {max})")]
    OutOfRange {
        name: &'static str,
        value: i64,
        max: i64,
    },
    #[error("elements belong to different fields: Q(sqrt({0}), sqrt({1})) vs Q(sqrt({2}), sqrt({3}))")]
    FieldMismatch(i64, i64, i64, i64),
    #[error("result is not representable with denominator 4")]
    Denominator,
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// Errors from the sum-of-squares engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("element {0} is not an algebraic integer")]
    NotIntegral(String),
    #[error("element {0} is not totally positive")]
    NotTotallyPositive(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

/// Errors from interval construction and witness generation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("family {family} requires s0 to be {expected}, got s0 = {s0}")]
    ParityMismatch {
        family: &'static str,
        expected: &'static str,
        s0: u64,
    },
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("radicand {d} has residue {residue} mod 4, which does not fit the {case} witness")]
    ResidueMismatch {
        case: &'static str,
        d: i64,
        residue: i64,
    },
    #[error("witness {0} is not totally positive")]
    WitnessNotTotallyPositive(String),
    #[error("interval union did not terminate before index {0}")]
    UnionDidNotTerminate(u64),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Errors from the product, diagonal-form and six-square pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("element {0} is not an algebraic integer")]
    NotIntegral(String),
    #[error("element {0} is not totally positive")]
    NotTotallyPositive(String),
    #[error("could not decompose the {part} part {value}")]
    PartDecompositionFailed { part: String, value: String },
    #[error("entries must lie in a single field")]
    MixedFields,
    #[error(transparent)]
    Engine(#[from] EngineError),
}
