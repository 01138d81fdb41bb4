//! Accuracy metrics, evaluation reports and the case-study runner.

mod case;
mod metrics;
mod report;

pub use case::{run_case, CaseConfig, CaseEvaluation, CaseResult, ChangeRow, ChangeTable};
pub use metrics::{magnitude_relative_error, mmre, pred, relative_error};
pub use report::{
    evaluate, percent_label, EvaluationReport, PredEntry, ProjectRow, ReportConfig, DEFAULT_OUTLIER_THRESHOLD,
    DEFAULT_PRED_LEVELS,
};
