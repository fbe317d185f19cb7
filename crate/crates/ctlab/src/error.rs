use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("value `{value}` is not in the range of `{var}`")]
    OutOfRange { var: String, value: String },
    #[error("invalid function system: {0}")]
    Law(String),
    #[error("function system is not recursive (its graph has a cycle)")]
    Cyclic,
    #[error("assignment is not compatible with its law: {0}")]
    Incompatible(String),
    #[error("inconsistent intervention: {0}")]
    InconsistentIntervention(String),
    #[error("laws are not similar")]
    Dissimilar,
    #[error("team is not uniform: it carries more than one law")]
    NotCausal,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("formula is outside the supported languages: {0}")]
    Language(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
