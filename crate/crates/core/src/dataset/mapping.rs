//! Editable rule tables that transfer source-model driver ratings onto the
//! SEER-SEM rating grid.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::raw::{RawProjectRecord, SourceModel, SourceRating};
use crate::error::{Error, Result};
use crate::parameter::ParameterId;
use crate::project::SeerProject;
use crate::rating::{check_coordinate, rating_to_coordinate, RatingLevel, NOMINAL};

const DEFAULT_MAPPING: &str = include_str!("../../data/default_mapping.toml");

#[derive(Debug, Clone, PartialEq)]
pub enum RuleSource {
    Driver {
        driver: String,
        levels: BTreeMap<SourceRating, f64>,
    },
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MappingRule {
    pub target: ParameterId,
    pub source: RuleSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelMapping {
    /// Coordinate given to rated parameters no rule covers.
    pub default: f64,
    pub rules: Vec<MappingRule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MappingTable {
    models: BTreeMap<SourceModel, ModelMapping>,
}

/// The direct preset: each main source level onto the neutral SEER sub-level.
pub fn direct_levels() -> BTreeMap<SourceRating, f64> {
    use RatingLevel::*;
    SourceRating::ALL
        .iter()
        .zip([VeryLow, Low, Nominal, High, VeryHigh, ExtraHigh])
        .map(|(&s, level)| (s, level.grid() as f64))
        .collect()
}

impl MappingTable {
    pub fn new(models: BTreeMap<SourceModel, ModelMapping>) -> Result<Self> {
        let table = Self { models };
        table.validate()?;
        Ok(table)
    }

    /// The shipped reconstruction (see `data/default_mapping.toml`).
    pub fn reconstructed_default() -> Self {
        Self::from_toml_str(DEFAULT_MAPPING).expect("bundled mapping is valid")
    }

    pub fn default_toml() -> &'static str {
        DEFAULT_MAPPING
    }

    pub fn model(&self, model: SourceModel) -> Option<&ModelMapping> {
        self.models.get(&model)
    }

    pub fn validate(&self) -> Result<()> {
        for (model, mapping) in &self.models {
            check_coordinate(mapping.default)
                .map_err(|_| Error::Mapping(format!("{model}: default {} outside [1, 18]", mapping.default)))?;
            let mut seen = BTreeMap::new();
            for rule in &mapping.rules {
                if !rule.target.is_rated() {
                    return Err(Error::Mapping(format!("{model}: {} is not rated", rule.target)));
                }
                if seen.insert(rule.target, ()).is_some() {
                    return Err(Error::Mapping(format!(
                        "{model}: {} is covered by more than one rule",
                        rule.target
                    )));
                }
                match &rule.source {
                    RuleSource::Driver { driver, levels } => {
                        if !model.has_driver(driver) {
                            return Err(Error::Mapping(format!(
                                "{model}: driver {driver} does not exist in this model"
                            )));
                        }
                        for (label, &x) in levels {
                            check_coordinate(x).map_err(|_| {
                                Error::Mapping(format!(
                                    "{model}: {driver}={label} maps to {x}, outside [1, 18]"
                                ))
                            })?;
                        }
                    }
                    RuleSource::Fixed(x) => {
                        check_coordinate(*x).map_err(|_| {
                            Error::Mapping(format!("{model}: fixed rating {x} for {} outside [1, 18]", rule.target))
                        })?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: MappingFile =
            toml::from_str(text).map_err(|e| Error::Mapping(e.message().to_string()))?;
        let mut models = BTreeMap::new();
        for (model, spec) in [
            (SourceModel::Cocomo81, file.cocomo81),
            (SourceModel::Cocomo87, file.cocomo87),
        ] {
            if let Some(spec) = spec {
                models.insert(model, spec.resolve(model)?);
            }
        }
        Self::new(models)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

/// Converts one source record into model terms. Parameters without a rule
/// get the mapping default; SIBR is 0 unless the record supplies it.
pub fn transfer(record: &RawProjectRecord, mapping: &MappingTable) -> Result<SeerProject> {
    let model = mapping.model(record.source_model).ok_or_else(|| {
        Error::Mapping(format!("no rules for source model {}", record.source_model))
    })?;
    let mut project = SeerProject::nominal(
        record.id.clone(),
        record.size_kloc * 1000.0,
        record.actual_effort,
    );
    project.ratings = [model.default; crate::parameter::RATED];
    project.sibr = record.sibr.unwrap_or(0.0);
    for rule in &model.rules {
        let coordinate = match &rule.source {
            RuleSource::Fixed(x) => *x,
            RuleSource::Driver { driver, levels } => {
                let rating = record.ratings.get(driver).ok_or_else(|| {
                    Error::Mapping(format!(
                        "project {}: rule for {} needs driver {driver}, which is not rated",
                        record.id, rule.target
                    ))
                })?;
                *levels.get(rating).ok_or_else(|| {
                    Error::Mapping(format!(
                        "project {}: {driver}={rating} has no level in the rule for {}",
                        record.id, rule.target
                    ))
                })?
            }
        };
        project.set_rating(rule.target, coordinate)?;
    }
    project.validate()?;
    Ok(project)
}

pub fn transfer_all(records: &[RawProjectRecord], mapping: &MappingTable) -> Result<Vec<SeerProject>> {
    records.iter().map(|r| transfer(r, mapping)).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    cocomo81: Option<ModelSpec>,
    cocomo87: Option<ModelSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    default: Option<RatingSpec>,
    #[serde(default)]
    rule: Vec<RuleSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleSpec {
    target: String,
    driver: Option<String>,
    levels: Option<LevelsSpec>,
    value: Option<RatingSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatingSpec {
    Number(f64),
    Label(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LevelsSpec {
    Preset(String),
    Explicit(BTreeMap<String, RatingSpec>),
}

impl RatingSpec {
    fn coordinate(&self) -> Result<f64> {
        match self {
            RatingSpec::Number(x) => check_coordinate(*x),
            RatingSpec::Label(label) => rating_to_coordinate(label),
        }
    }
}

impl ModelSpec {
    fn resolve(self, model: SourceModel) -> Result<ModelMapping> {
        let default = match self.default {
            Some(spec) => spec
                .coordinate()
                .map_err(|e| Error::Mapping(format!("{model}: default: {e}")))?,
            None => NOMINAL,
        };
        let rules = self
            .rule
            .into_iter()
            .map(|spec| spec.resolve(model))
            .collect::<Result<_>>()?;
        Ok(ModelMapping { default, rules })
    }
}

impl RuleSpec {
    fn resolve(self, model: SourceModel) -> Result<MappingRule> {
        let target: ParameterId = self
            .target
            .parse()
            .map_err(|e| Error::Mapping(format!("{model}: {e}")))?;
        let fail = |detail: String| Error::Mapping(format!("{model}: rule for {target}: {detail}"));
        let source = match (self.driver, self.value) {
            (Some(driver), None) => {
                let levels = match self.levels {
                    None => direct_levels(),
                    Some(LevelsSpec::Preset(name)) if name.eq_ignore_ascii_case("direct") => direct_levels(),
                    Some(LevelsSpec::Preset(name)) => return Err(fail(format!("unknown preset `{name}`"))),
                    Some(LevelsSpec::Explicit(map)) => map
                        .iter()
                        .map(|(label, spec)| {
                            let rating: SourceRating = label.parse().map_err(|e: Error| fail(e.to_string()))?;
                            let x = spec.coordinate().map_err(|e| fail(e.to_string()))?;
                            Ok((rating, x))
                        })
                        .collect::<Result<_>>()?,
                };
                RuleSource::Driver {
                    driver: driver.to_ascii_uppercase(),
                    levels,
                }
            }
            (None, Some(value)) => {
                if self.levels.is_some() {
                    return Err(fail("`levels` needs a `driver`".into()));
                }
                RuleSource::Fixed(value.coordinate().map_err(|e| fail(e.to_string()))?)
            }
            _ => return Err(fail("exactly one of `driver` or `value` is required".into())),
        };
        Ok(MappingRule { target, source })
    }
}
