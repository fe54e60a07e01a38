use setsketch::SketchError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// 2 for bad arguments or inputs, 1 for I/O trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Spec(_) | HarnessError::Sketch(_) => 2,
            HarnessError::Io(_) | HarnessError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn spec_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(HarnessError::Spec(msg.into()))
}
