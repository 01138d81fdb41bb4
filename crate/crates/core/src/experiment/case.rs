//! Case-study runner: split, train, and compare the baseline table against
//! the calibrated one.

use serde::{Deserialize, Serialize};

use super::report::{csv_field, evaluate, EvaluationReport, ReportConfig};
use crate::calibration::{train, CalibrationConfig, TrainingTrace};
use crate::dataset::{split, Protocol};
use crate::error::Result;
use crate::project::SeerProject;
use crate::table::ValueTable;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaseConfig {
    pub calibration: CalibrationConfig,
    pub report: ReportConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeRow {
    pub metric: String,
    pub baseline: f64,
    pub calibrated: f64,
    /// `calibrated - baseline`; negative MMRE change is an improvement.
    pub change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeTable {
    pub rows: Vec<ChangeRow>,
}

impl ChangeTable {
    pub fn between(baseline: &EvaluationReport, calibrated: &EvaluationReport) -> Self {
        let rows = baseline
            .metrics()
            .into_iter()
            .zip(calibrated.metrics())
            .map(|((metric, b), (_, c))| ChangeRow {
                metric,
                baseline: b,
                calibrated: c,
                change: c - b,
            })
            .collect();
        Self { rows }
    }

    pub fn get(&self, metric: &str) -> Option<&ChangeRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,baseline,calibrated,change\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.metric, r.baseline, r.calibrated, r.change));
        }
        out
    }

    /// Rates in percent to two decimals; the outlier row stays a count.
    pub fn to_text(&self, title: &str) -> String {
        let mut out = format!("{title}\n{:<12} {:>11} {:>11} {:>9}\n", "metric", "baseline", "calibrated", "change");
        for r in &self.rows {
            if r.metric == "outliers" {
                out.push_str(&format!(
                    "{:<12} {:>11} {:>11} {:>+9}\n",
                    r.metric, r.baseline, r.calibrated, r.change
                ));
            } else {
                out.push_str(&format!(
                    "{:<12} {:>10.2}% {:>10.2}% {:>+9.2}\n",
                    r.metric,
                    100.0 * r.baseline,
                    100.0 * r.calibrated,
                    100.0 * r.change
                ));
            }
        }
        out
    }
}

/// Baseline and calibrated reports for one testing list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseEvaluation {
    pub name: String,
    pub baseline: EvaluationReport,
    pub calibrated: EvaluationReport,
    pub change: ChangeTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub protocol: Protocol,
    pub training_ids: Vec<String>,
    /// `published` first, then `industrial` when given.
    pub evaluations: Vec<CaseEvaluation>,
    pub trace: TrainingTrace,
}

impl CaseResult {
    pub fn calibrated_table(&self) -> &ValueTable {
        &self.trace.table
    }

    pub fn evaluation(&self, name: &str) -> Option<&CaseEvaluation> {
        self.evaluations.iter().find(|e| e.name == name)
    }

    pub fn training_csv(&self) -> String {
        let mut out = String::from("id\n");
        for id in &self.training_ids {
            out.push_str(&csv_field(id));
            out.push('\n');
        }
        out
    }
}

/// Splits `published` per `protocol`, trains on the training list and
/// evaluates both tables on the published testing list. An `industrial` set
/// never takes part in training and is evaluated in full.
pub fn run_case(
    published: &[SeerProject],
    industrial: Option<&[SeerProject]>,
    table: &ValueTable,
    protocol: Protocol,
    config: &CaseConfig,
) -> Result<CaseResult> {
    config.report.validate()?;
    let (training, testing) = split(published, protocol, table)?;
    let trace = train(&training, table, &config.calibration)?;

    let mut evaluations = Vec::new();
    let mut targets = vec![("published", testing)];
    if let Some(industrial) = industrial {
        targets.push(("industrial", industrial.to_vec()));
    }
    for (name, projects) in targets {
        let baseline = evaluate(&projects, table, &config.report)?;
        let calibrated = evaluate(&projects, &trace.table, &config.report)?;
        evaluations.push(CaseEvaluation {
            name: name.to_string(),
            change: ChangeTable::between(&baseline, &calibrated),
            baseline,
            calibrated,
        });
    }
    Ok(CaseResult {
        protocol,
        training_ids: training.into_iter().map(|p| p.id).collect(),
        evaluations,
        trace,
    })
}
