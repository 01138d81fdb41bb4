use thiserror::Error;

use crate::calibration::TrainingTrace;
use crate::parameter::ParameterId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown rating label `{0}`")]
    UnknownLabel(String),

    #[error("rating coordinate {0} is outside [1, 18]")]
    CoordinateRange(f64),

    #[error("unknown parameter symbol `{0}`")]
    UnknownParameter(String),

    #[error("rule level {0} is outside [1, 18]")]
    LevelRange(usize),

    #[error("input {x} is outside [{lo}, {hi}]")]
    InputRange { x: f64, lo: f64, hi: f64 },

    #[error("firing strengths are all zero")]
    DegenerateFiring,

    #[error("no value supplied for parameter {0}")]
    MissingParameter(ParameterId),

    #[error("domain error in {context}: {detail}")]
    Domain { context: String, detail: String },

    #[error("invalid value table: {0}")]
    Table(String),

    #[error("invalid mapping: {0}")]
    Mapping(String),

    #[error("dataset schema error: {0}")]
    Schema(String),

    #[error("parse error at row {row}: {detail}")]
    Parse { row: usize, detail: String },

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("training diverged at epoch {epoch}: loss became non-finite")]
    Diverged {
        epoch: usize,
        trace: Box<TrainingTrace>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Domain {
            context: context.into(),
            detail: detail.into(),
        }
    }
}
