use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown node id {0}")]
    UnknownNode(usize),
    #[error("unsupported Cartan type `{0}`")]
    UnsupportedType(String),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("missing value for variable {0}")]
    MissingAssignment(String),
    #[error("sequence mismatch: {0}")]
    SequenceMismatch(String),
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("deformation regime mismatch")]
    RegimeMismatch,
    #[error("specialization values are not pairwise distinct")]
    RepeatedValues,
    #[error("module enumeration did not stabilize within bounds: {0}")]
    NotStabilized(String),
    #[error("too many polynomial variables: {0} requested, at most {max} supported", max = crate::engine::MAX_VARS)]
    TooManyVariables(usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
