//! Evaluation reports for a table over a list of projects.

use serde::{Deserialize, Serialize};

use super::metrics::{magnitude_relative_error, mmre, pred, relative_error};
use crate::engine;
use crate::error::{Error, Result};
use crate::fuzzy::bank_translate;
use crate::project::SeerProject;
use crate::table::ValueTable;

pub const DEFAULT_PRED_LEVELS: [f64; 4] = [0.2, 0.3, 0.5, 1.0];
pub const DEFAULT_OUTLIER_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    /// PRED levels as fractions; the defaults are always reported.
    pub pred_levels: Vec<f64>,
    pub outlier_threshold: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            pred_levels: DEFAULT_PRED_LEVELS.to_vec(),
            outlier_threshold: DEFAULT_OUTLIER_THRESHOLD,
        }
    }
}

impl ReportConfig {
    /// Default levels merged with the configured ones, sorted and deduplicated.
    pub fn levels(&self) -> Result<Vec<f64>> {
        let mut levels = DEFAULT_PRED_LEVELS.to_vec();
        for &l in &self.pred_levels {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::Config(format!("PRED level {l} must be finite and non-negative")));
            }
            levels.push(l);
        }
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        Ok(levels)
    }

    pub fn validate(&self) -> Result<()> {
        self.levels()?;
        if !(self.outlier_threshold >= 0.0) {
            return Err(Error::Config(format!(
                "outlier threshold {} must be non-negative",
                self.outlier_threshold
            )));
        }
        Ok(())
    }
}

/// Efforts in person-years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRow {
    pub id: String,
    pub estimated: f64,
    pub actual: f64,
    pub re: f64,
    pub mre: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredEntry {
    pub level: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub rows: Vec<ProjectRow>,
    pub mmre: f64,
    pub pred: Vec<PredEntry>,
    pub outlier_threshold: f64,
    /// Ids of projects whose MRE exceeds the threshold, in input order.
    pub outliers: Vec<String>,
}

/// Estimates every project with `table` and scores it against its actual effort.
pub fn evaluate(projects: &[SeerProject], table: &ValueTable, config: &ReportConfig) -> Result<EvaluationReport> {
    config.validate()?;
    let mut rows = Vec::with_capacity(projects.len());
    for project in projects {
        project.validate()?;
        let values = bank_translate(project, table)?;
        let estimated = engine::estimate(project.size, &values)?.effort;
        rows.push(ProjectRow {
            id: project.id.clone(),
            estimated,
            actual: project.actual_effort,
            re: relative_error(estimated, project.actual_effort)?,
            mre: magnitude_relative_error(estimated, project.actual_effort)?,
        });
    }
    EvaluationReport::from_rows(rows, config)
}

impl EvaluationReport {
    pub fn from_rows(rows: Vec<ProjectRow>, config: &ReportConfig) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.estimated, r.actual)).collect();
        let mut pred_entries = Vec::new();
        for level in config.levels()? {
            pred_entries.push(PredEntry {
                level,
                value: pred(&pairs, level)?,
            });
        }
        let outliers = rows
            .iter()
            .filter(|r| r.mre > config.outlier_threshold)
            .map(|r| r.id.clone())
            .collect();
        Ok(Self {
            mmre: mmre(&pairs)?,
            pred: pred_entries,
            outlier_threshold: config.outlier_threshold,
            outliers,
            rows,
        })
    }

    pub fn pred_at(&self, level: f64) -> Option<f64> {
        self.pred.iter().find(|p| p.level == level).map(|p| p.value)
    }

    pub fn outlier_count(&self) -> usize {
        self.outliers.len()
    }

    /// Per-project rows as CSV. Efforts are given in person-years and in
    /// person-months using `months_per_year`.
    pub fn rows_csv(&self, months_per_year: f64) -> String {
        let mut out = String::from("id,estimated_py,actual_py,estimated_pm,actual_pm,re,mre,outlier\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                csv_field(&r.id),
                r.estimated,
                r.actual,
                r.estimated * months_per_year,
                r.actual * months_per_year,
                r.re,
                r.mre,
                r.mre > self.outlier_threshold
            ));
        }
        out
    }

    /// Aggregate metrics as `metric,value` CSV (fractions, not percent).
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        for (name, value) in self.metrics() {
            out.push_str(&format!("{name},{value}\n"));
        }
        out
    }

    /// Aggregate metrics in report order: MMRE, each PRED level, outliers.
    pub fn metrics(&self) -> Vec<(String, f64)> {
        let mut metrics = vec![("MMRE".to_string(), self.mmre)];
        for p in &self.pred {
            metrics.push((format!("PRED({})", percent_label(p.level)), p.value));
        }
        metrics.push(("outliers".to_string(), self.outlier_count() as f64));
        metrics
    }

    /// Aligned plain-text rendering with percentages to two decimals.
    pub fn to_text(&self, title: &str) -> String {
        let mut out = format!("{title}\n");
        let width = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(0).max(2);
        out.push_str(&format!(
            "{:<width$}  {:>14}  {:>14}  {:>10}  {:>10}\n",
            "id", "estimated(py)", "actual(py)", "RE(%)", "MRE(%)"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<width$}  {:>14.4}  {:>14.4}  {:>10.2}  {:>10.2}{}\n",
                r.id,
                r.estimated,
                r.actual,
                100.0 * r.re,
                100.0 * r.mre,
                if r.mre > self.outlier_threshold { "  *" } else { "" }
            ));
        }
        out.push('\n');
        out.push_str(&format!("{:<12} {:>8.2}%\n", "MMRE", 100.0 * self.mmre));
        for p in &self.pred {
            out.push_str(&format!(
                "{:<12} {:>8.2}%\n",
                format!("PRED({})", percent_label(p.level)),
                100.0 * p.value
            ));
        }
        out.push_str(&format!(
            "{:<12} {:>8}  (MRE > {}, of {})\n",
            "outliers",
            self.outlier_count(),
            percent_label(self.outlier_threshold),
            self.rows.len()
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `0.3` → `30%`.
pub fn percent_label(fraction: f64) -> String {
    let pct = 100.0 * fraction;
    let rounded = (pct * 1e6).round() / 1e6;
    format!("{rounded}%")
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
