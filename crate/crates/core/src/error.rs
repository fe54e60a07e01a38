use thiserror::Error;

/// Errors returned by sketch construction, merging, estimation and decoding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SketchError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("incompatible sketches: {0}")]
    Incompatible(String),

    #[error("permutation sampler exhausted after {0} draws")]
    SamplerExhausted(usize),

    #[error("malformed sketch bytes: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, SketchError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(SketchError::InvalidArgument(msg.into()))
}
