//! The trainable parameter-value table: one row of 18 consequent values per
//! rated parameter, together with the direction each row must stay sorted in.
//!
//! # File format
//!
//! Tables are stored as TOML. An optional `[provenance]` table records where
//! the values came from, followed by one `[[parameter]]` section per rated
//! parameter:
//!
//! ```toml
//! [[parameter]]
//! symbol = "ACAP"
//! direction = "decreasing"
//! values = [1.40, 1.34, ...]   # exactly 18 entries, VLo- through EHi+
//! ```
//!
//! Every rated symbol must appear exactly once; `SIBR` is not allowed.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parameter::{ParameterId, RATED};
use crate::rating::LEVELS;

pub type Row = [f64; LEVELS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    /// Whether `a` followed by `b` respects the direction (non-strict).
    pub fn allows(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Increasing => a <= b,
            Direction::Decreasing => a >= b,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositive {
        parameter: ParameterId,
        level: usize,
        value: f64,
    },
    /// Levels `(r, r + 1)` (1-based) break the declared order.
    OutOfOrder {
        parameter: ParameterId,
        levels: (usize, usize),
        values: (f64, f64),
        direction: Direction,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositive {
                parameter,
                level,
                value,
            } => write!(f, "{parameter} level {level}: value {value} is not positive"),
            Violation::OutOfOrder {
                parameter,
                levels,
                values,
                direction,
            } => write!(
                f,
                "{parameter} levels ({}, {}): values {} and {} are not {direction}",
                levels.0, levels.1, values.0, values.1
            ),
        }
    }
}

/// Provenance recorded in the header of a serialized table.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub origin: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epochs_run: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_loss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_loss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<toml::Table>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    rows: [Row; RATED],
    directions: [Direction; RATED],
}

impl ValueTable {
    pub fn new(rows: [Row; RATED], directions: [Direction; RATED]) -> Self {
        Self { rows, directions }
    }

    pub fn row(&self, id: ParameterId) -> &Row {
        &self.rows[rated_row(id)]
    }

    pub fn direction(&self, id: ParameterId) -> Direction {
        self.directions[rated_row(id)]
    }

    pub fn rows(&self) -> &[Row; RATED] {
        &self.rows
    }

    pub fn directions(&self) -> &[Direction; RATED] {
        &self.directions
    }

    /// Value at 1-based `level`.
    pub fn value(&self, id: ParameterId, level: usize) -> f64 {
        self.row(id)[level - 1]
    }

    pub fn set_row(&mut self, id: ParameterId, row: Row) {
        self.rows[rated_row(id)] = row;
    }

    pub fn set_value(&mut self, id: ParameterId, level: usize, value: f64) {
        self.rows[rated_row(id)][level - 1] = value;
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [Row; RATED] {
        &mut self.rows
    }

    /// Positivity and adjacent-order violations. Empty iff the table is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (&parameter, (row, &direction)) in ParameterId::rated()
            .iter()
            .zip(self.rows.iter().zip(self.directions.iter()))
        {
            for (i, &value) in row.iter().enumerate() {
                if !(value > 0.0) || !value.is_finite() {
                    violations.push(Violation::NonPositive {
                        parameter,
                        level: i + 1,
                        value,
                    });
                }
            }
            for i in 0..LEVELS - 1 {
                let (a, b) = (row[i], row[i + 1]);
                if !direction.allows(a, b) {
                    violations.push(Violation::OutOfOrder {
                        parameter,
                        levels: (i + 1, i + 2),
                        values: (a, b),
                        direction,
                    });
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Built-in SYNTHETIC table: a geometric ramp per parameter anchored at
    /// its Nominal value. It is not calibrated against any real data.
    pub fn synthetic() -> Self {
        let mut rows = [[0.0; LEVELS]; RATED];
        let mut directions = [Direction::Increasing; RATED];
        for (&(id, direction, nominal, step), (row, dir)) in SYNTHETIC_RAMPS
            .iter()
            .zip(rows.iter_mut().zip(directions.iter_mut()))
        {
            debug_assert!(id.is_rated());
            *dir = direction;
            for (r, v) in row.iter_mut().enumerate() {
                let offset = r as f64 + 1.0 - crate::rating::NOMINAL;
                let exponent = match direction {
                    Direction::Increasing => offset,
                    Direction::Decreasing => -offset,
                };
                *v = nominal * step.powf(exponent);
            }
        }
        Self { rows, directions }
    }

    pub fn from_toml_str(text: &str) -> Result<(Self, Option<Provenance>)> {
        let file: TableFile =
            toml::from_str(text).map_err(|e| Error::Table(e.message().to_string()))?;
        let mut rows: [Option<Row>; RATED] = [None; RATED];
        let mut directions = [Direction::Increasing; RATED];
        for section in file.parameter {
            let id: ParameterId = section.symbol.parse()?;
            let Some(index) = id.row() else {
                return Err(Error::Table(format!("{id} is not a rated parameter")));
            };
            if rows[index].is_some() {
                return Err(Error::Table(format!("{id} appears more than once")));
            }
            let row: Row = section.values.as_slice().try_into().map_err(|_| {
                Error::Table(format!(
                    "{id} has {} values, expected {LEVELS}",
                    section.values.len()
                ))
            })?;
            if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::Table(format!("{id} has non-finite value {bad}")));
            }
            rows[index] = Some(row);
            directions[index] = section.direction;
        }
        let missing: Vec<&str> = ParameterId::rated()
            .iter()
            .zip(rows.iter())
            .filter(|(_, r)| r.is_none())
            .map(|(id, _)| id.symbol())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Table(format!(
                "missing parameters: {}",
                missing.join(", ")
            )));
        }
        let rows = rows.map(|r| r.expect("checked above"));
        Ok((Self { rows, directions }, file.provenance))
    }

    pub fn to_toml_string(&self, provenance: Option<&Provenance>) -> String {
        let file = TableFile {
            provenance: provenance.cloned(),
            parameter: ParameterId::rated()
                .iter()
                .map(|&id| ParameterSection {
                    symbol: id.symbol().to_string(),
                    direction: self.direction(id),
                    values: self.row(id).to_vec(),
                })
                .collect(),
        };
        toml::to_string(&file).expect("table serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Self, Option<Provenance>)> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>, provenance: Option<&Provenance>) -> Result<()> {
        std::fs::write(path, self.to_toml_string(provenance))?;
        Ok(())
    }
}

fn rated_row(id: ParameterId) -> usize {
    id.row()
        .unwrap_or_else(|| panic!("{id} has no row in the value table"))
}

pub fn validate_table(table: &ValueTable) -> Vec<Violation> {
    table.validate()
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    parameter: Vec<ParameterSection>,
}

#[derive(Serialize, Deserialize)]
struct ParameterSection {
    symbol: String,
    direction: Direction,
    values: Vec<f64>,
}

use Direction::{Decreasing as Dec, Increasing as Inc};
use ParameterId::*;

// (parameter, direction, Nominal value, ratio between adjacent levels)
const SYNTHETIC_RAMPS: [(ParameterId, Direction, f64, f64); RATED] = [
    (Acap, Dec, 1.0, 1.05),
    (Aexp, Inc, 1.0, 1.12),
    (Pcap, Dec, 1.0, 1.05),
    (Lexp, Inc, 1.0, 1.12),
    (Dexp, Inc, 1.0, 1.12),
    (Texp, Inc, 1.0, 1.12),
    (Pexp, Inc, 1.0, 1.12),
    (Modp, Dec, 1.0, 1.03),
    (Tool, Dec, 1.0, 1.03),
    (Turn, Inc, 1.0, 1.03),
    (Term, Inc, 1.0, 1.02),
    (Mult, Inc, 1.0, 1.02),
    (Rded, Inc, 1.0, 1.02),
    (Rloc, Inc, 1.0, 1.02),
    (Dsvl, Inc, 1.0, 1.03),
    (Psvl, Inc, 1.0, 1.03),
    (Rvol, Inc, 1.0, 1.04),
    (Spec, Inc, 1.0, 1.03),
    (Test, Inc, 1.0, 1.03),
    (Qual, Inc, 1.0, 1.03),
    (Rhst, Inc, 1.0, 1.02),
    (Reus, Inc, 1.0, 1.05),
    (Lang, Inc, 1.0, 1.08),
    (Dsy, Inc, 1.0, 1.08),
    (Appl, Inc, 1.0, 1.12),
    (Psys, Inc, 1.0, 1.08),
    (Disp, Inc, 1.0, 1.02),
    (Memc, Inc, 1.0, 1.03),
    (Timc, Inc, 1.0, 1.03),
    (Rtim, Inc, 1.0, 1.03),
    (Tsys, Inc, 1.0, 1.08),
    (Tsvl, Inc, 1.0, 1.03),
    (Secr, Inc, 1.0, 1.03),
    (D, Inc, 10.0, 1.05),
];
