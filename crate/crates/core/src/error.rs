use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample count {got} too small, need at least {min}")]
    SampleCountTooSmall { got: u64, min: u64 },

    #[error("generating function returned {value} outside [0, 1]")]
    InvalidGeneratingFunction { value: f64 },

    #[error("orientation field disagrees with recorded value at level {level}")]
    InconsistentField { level: i64 },

    #[error("rejected configuration: {0}")]
    RejectedConfig(String),

    #[error("empty sample")]
    EmptySample,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}
