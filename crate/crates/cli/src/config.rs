//! Effective run configuration: defaults, then the config file, then flags.

use serde::{Deserialize, Serialize};
use seer_nf::calibration::CalibrationConfig;
use seer_nf::dataset::MONTHS_PER_YEAR;
use seer_nf::experiment::{CaseConfig, ReportConfig};

use crate::cli::TrainingFlags;
use crate::failure::{require_file, Outcome, StageExt};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub protocol: Option<String>,
    pub months_per_year: f64,
    pub calibration: CalibrationConfig,
    pub report: ReportConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            protocol: None,
            months_per_year: MONTHS_PER_YEAR,
            calibration: CalibrationConfig::default(),
            report: ReportConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn resolve(flags: &TrainingFlags, protocol: Option<&str>) -> Outcome<Self> {
        let mut config = match &flags.config {
            Some(path) => {
                require_file(path, "config file", "config")?;
                let text = std::fs::read_to_string(path).stage("config")?;
                toml::from_str::<RunConfig>(&text).stage("config")?
            }
            None => RunConfig::default(),
        };
        if let Some(p) = protocol {
            config.protocol = Some(p.to_string());
        }
        if let Some(x) = flags.alpha {
            config.calibration.learning_rate = x;
        }
        if let Some(x) = flags.epochs {
            config.calibration.max_epochs = x;
        }
        if let Some(x) = flags.tolerance {
            config.calibration.tolerance = x;
        }
        if let Some(x) = flags.seed {
            config.calibration.seed = x;
        }
        if flags.no_backtracking {
            config.calibration.backtracking = false;
        }
        config.report.pred_levels.extend(&flags.pred_levels);
        if let Some(x) = flags.outlier_threshold {
            config.report.outlier_threshold = x;
        }
        if let Some(x) = flags.months_per_year {
            config.months_per_year = x;
        }
        config.calibration.validate().stage("config")?;
        config.report.validate().stage("config")?;
        if !(config.months_per_year > 0.0 && config.months_per_year.is_finite()) {
            return Err(crate::failure::fail(
                "config",
                format!("months per year {} must be positive", config.months_per_year),
            ));
        }
        Ok(config)
    }

    pub fn case_config(&self) -> CaseConfig {
        CaseConfig {
            calibration: self.calibration.clone(),
            report: self.report.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
