use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parameter::{ParameterId, RATED};
use crate::rating::{check_coordinate, NOMINAL};

/// One historical (or to-be-estimated) project in model terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SeerProject {
    pub id: String,
    /// Effective size in SLOC.
    pub size: f64,
    /// Actual effort in person-years.
    pub actual_effort: f64,
    /// Fraction of the software impacted by reuse, in `[0, 1]`.
    pub sibr: f64,
    /// Rating coordinate per rated parameter, indexed by table row.
    pub ratings: [f64; RATED],
    pub weight: f64,
}

impl SeerProject {
    /// A project with every parameter rated Nominal, SIBR 0 and weight 1.
    pub fn nominal(id: impl Into<String>, size: f64, actual_effort: f64) -> Self {
        Self {
            id: id.into(),
            size,
            actual_effort,
            sibr: 0.0,
            ratings: [NOMINAL; RATED],
            weight: 1.0,
        }
    }

    pub fn rating(&self, id: ParameterId) -> f64 {
        self.ratings[id.row().expect("rated parameter")]
    }

    pub fn set_rating(&mut self, id: ParameterId, coordinate: f64) -> Result<()> {
        let row = id
            .row()
            .ok_or_else(|| Error::domain("rating", format!("{id} is not rated")))?;
        self.ratings[row] = check_coordinate(coordinate)?;
        Ok(())
    }

    pub fn with_rating(mut self, id: ParameterId, coordinate: f64) -> Result<Self> {
        self.set_rating(id, coordinate)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let context = || format!("project {}", self.id);
        if !(self.size > 0.0 && self.size.is_finite()) {
            return Err(Error::domain(context(), format!("size {} must be positive", self.size)));
        }
        if !(self.actual_effort > 0.0 && self.actual_effort.is_finite()) {
            return Err(Error::domain(
                context(),
                format!("actual effort {} must be positive", self.actual_effort),
            ));
        }
        if !(0.0..=1.0).contains(&self.sibr) {
            return Err(Error::domain(context(), format!("SIBR {} outside [0, 1]", self.sibr)));
        }
        if !(self.weight >= 0.0 && self.weight.is_finite()) {
            return Err(Error::domain(context(), format!("weight {} must be non-negative", self.weight)));
        }
        for &x in &self.ratings {
            check_coordinate(x)?;
        }
        Ok(())
    }

    pub fn to_record(&self) -> ProjectRecord {
        ProjectRecord {
            id: self.id.clone(),
            size: self.size,
            actual_effort: self.actual_effort,
            sibr: self.sibr,
            weight: self.weight,
            ratings: ParameterId::rated()
                .iter()
                .map(|&parameter| RatingEntry {
                    parameter,
                    coordinate: self.rating(parameter),
                })
                .collect(),
        }
    }

    pub fn from_record(record: &ProjectRecord) -> Result<Self> {
        let mut project = Self::nominal(record.id.clone(), record.size, record.actual_effort);
        project.sibr = record.sibr;
        project.weight = record.weight;
        for entry in &record.ratings {
            project.set_rating(entry.parameter, entry.coordinate)?;
        }
        project.validate()?;
        Ok(project)
    }
}

/// Serializable view of a [`SeerProject`] with ratings in index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRecord {
    pub id: String,
    pub size: f64,
    pub actual_effort: f64,
    pub sibr: f64,
    pub weight: f64,
    pub ratings: Vec<RatingEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatingEntry {
    pub parameter: ParameterId,
    pub coordinate: f64,
}
