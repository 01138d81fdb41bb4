//! The 18-level linguistic rating scale and its numeric grid.
//!
//! Every rated parameter is scored on six main levels (VLo, Low, Nom, Hi,
//! VHi, EHi), each split into minus, neutral and plus sub-levels. Level `r`
//! sits at grid coordinate `r` in `1..=18`. Project ratings are stored as
//! coordinates so that linguistic and continuous inputs share one
//! representation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of rating levels (and fuzzy rules per parameter).
pub const LEVELS: usize = 18;

/// Grid coordinate of the Nominal level.
pub const NOMINAL: f64 = 8.0;

pub const MIN_COORDINATE: f64 = 1.0;
pub const MAX_COORDINATE: f64 = LEVELS as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RatingLevel {
    VeryLowMinus,
    VeryLow,
    VeryLowPlus,
    LowMinus,
    Low,
    LowPlus,
    NominalMinus,
    Nominal,
    NominalPlus,
    HighMinus,
    High,
    HighPlus,
    VeryHighMinus,
    VeryHigh,
    VeryHighPlus,
    ExtraHighMinus,
    ExtraHigh,
    ExtraHighPlus,
}

impl RatingLevel {
    pub const ALL: [RatingLevel; LEVELS] = [
        RatingLevel::VeryLowMinus,
        RatingLevel::VeryLow,
        RatingLevel::VeryLowPlus,
        RatingLevel::LowMinus,
        RatingLevel::Low,
        RatingLevel::LowPlus,
        RatingLevel::NominalMinus,
        RatingLevel::Nominal,
        RatingLevel::NominalPlus,
        RatingLevel::HighMinus,
        RatingLevel::High,
        RatingLevel::HighPlus,
        RatingLevel::VeryHighMinus,
        RatingLevel::VeryHigh,
        RatingLevel::VeryHighPlus,
        RatingLevel::ExtraHighMinus,
        RatingLevel::ExtraHigh,
        RatingLevel::ExtraHighPlus,
    ];

    const LABELS: [&'static str; LEVELS] = [
        "VLo-", "VLo", "VLo+", "Low-", "Low", "Low+", "Nom-", "Nom", "Nom+", "Hi-", "Hi", "Hi+",
        "VHi-", "VHi", "VHi+", "EHi-", "EHi", "EHi+",
    ];

    /// 1-based position on the grid.
    pub fn grid(self) -> usize {
        self as usize + 1
    }

    pub fn label(self) -> &'static str {
        Self::LABELS[self as usize]
    }

    pub fn from_grid(grid: usize) -> Option<Self> {
        (1..=LEVELS).contains(&grid).then(|| Self::ALL[grid - 1])
    }
}

impl fmt::Display for RatingLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RatingLevel {
    type Err = Error;

    /// Accepts the canonical labels case-insensitively, with either an ASCII
    /// hyphen or U+2212 as the minus marker.
    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().replace('\u{2212}', "-");
        Self::LABELS
            .iter()
            .position(|label| label.eq_ignore_ascii_case(&normalized))
            .map(|i| Self::ALL[i])
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

impl Serialize for RatingLevel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for RatingLevel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn rating_to_coordinate(label: &str) -> Result<f64> {
    Ok(label.parse::<RatingLevel>()?.grid() as f64)
}

/// Nearest label to `x`; an exact half rounds toward the lower grid.
pub fn coordinate_to_rating(x: f64) -> Result<RatingLevel> {
    check_coordinate(x)?;
    let lower = x.floor();
    let grid = if x - lower <= 0.5 { lower } else { lower + 1.0 };
    Ok(RatingLevel::from_grid(grid as usize).expect("grid within range"))
}

pub fn check_coordinate(x: f64) -> Result<f64> {
    if (MIN_COORDINATE..=MAX_COORDINATE).contains(&x) {
        Ok(x)
    } else {
        Err(Error::CoordinateRange(x))
    }
}

/// Parses either a label or a numeric coordinate.
pub fn parse_rating(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    match trimmed.parse::<f64>() {
        Ok(x) => check_coordinate(x),
        Err(_) => rating_to_coordinate(trimmed),
    }
}
