use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("images {0:?} are not a bijection on 1..=d")]
    NotABijection(Vec<usize>),

    #[error("generator index {0} out of range for {1} generators")]
    GeneratorOutOfRange(i64, usize),

    #[error("group closure exceeded the element cap of {0}")]
    ClosureLimit(usize),

    #[error("cell count {0} exceeds the limit {1}")]
    CellLimit(usize, usize),

    #[error("induced map is not a well-defined automorphism: {0}")]
    IllDefinedAutomorphism(String),

    #[error("element does not belong to the ambient group")]
    ForeignElement,

    #[error(
        "component '{name}' is not admissible: {detail} \
         (each oval must traverse every base arc exactly once, \
         mapping homeomorphically onto the base circle)"
    )]
    Inadmissible { name: String, detail: String },

    #[error("incompatible lifts: {0}")]
    IncompatibleLifts(String),

    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),

    #[error("guardrail exceeded: {0}")]
    Guardrail(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
