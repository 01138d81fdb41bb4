//! Canonical parameter registry.
//!
//! Indices 1 through 34 are rated and each has its own fuzzy sub-model and
//! table row. Index 34 is the staffing complexity `D`; index 35 is `SIBR`,
//! which is entered directly as a fraction and never rated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of rated parameters.
pub const RATED: usize = 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParameterId {
    Acap = 1,
    Aexp,
    Pcap,
    Lexp,
    Dexp,
    Texp,
    Pexp,
    Modp,
    Tool,
    Turn,
    Term,
    Mult,
    Rded,
    Rloc,
    Dsvl,
    Psvl,
    Rvol,
    Spec,
    Test,
    Qual,
    Rhst,
    Reus,
    Lang,
    Dsy,
    Appl,
    Psys,
    Disp,
    Memc,
    Timc,
    Rtim,
    Tsys,
    Tsvl,
    Secr,
    D,
    Sibr,
}

use ParameterId::*;

impl ParameterId {
    /// All parameters in index order.
    pub const ALL: [ParameterId; 35] = [
        Acap, Aexp, Pcap, Lexp, Dexp, Texp, Pexp, Modp, Tool, Turn, Term, Mult, Rded, Rloc, Dsvl,
        Psvl, Rvol, Spec, Test, Qual, Rhst, Reus, Lang, Dsy, Appl, Psys, Disp, Memc, Timc, Rtim,
        Tsys, Tsvl, Secr, D, Sibr,
    ];

    const SYMBOLS: [&'static str; 35] = [
        "ACAP", "AEXP", "PCAP", "LEXP", "DEXP", "TEXP", "PEXP", "MODP", "TOOL", "TURN", "TERM",
        "MULT", "RDED", "RLOC", "DSVL", "PSVL", "RVOL", "SPEC", "TEST", "QUAL", "RHST", "REUS",
        "LANG", "DSY", "APPL", "PSYS", "DISP", "MEMC", "TIMC", "RTIM", "TSYS", "TSVL", "SECR", "D",
        "SIBR",
    ];

    /// The rated parameters (indices 1..=34) in index order.
    pub fn rated() -> &'static [ParameterId] {
        &Self::ALL[..RATED]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        (1..=Self::ALL.len()).contains(&index).then(|| Self::ALL[index - 1])
    }

    pub fn symbol(self) -> &'static str {
        Self::SYMBOLS[self.index() - 1]
    }

    pub fn is_rated(self) -> bool {
        self.index() <= RATED
    }

    /// Zero-based row in a value table, `None` for SIBR.
    pub fn row(self) -> Option<usize> {
        self.is_rated().then(|| self.index() - 1)
    }
}

impl fmt::Display for ParameterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for ParameterId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        // RHST is sometimes written HOST; TSY is the formula spelling of TSYS.
        let s = match s.to_ascii_uppercase().as_str() {
            "HOST" => "RHST".to_string(),
            "TSY" => "TSYS".to_string(),
            other => other.to_string(),
        };
        Self::SYMBOLS
            .iter()
            .position(|sym| *sym == s)
            .map(|i| Self::ALL[i])
            .ok_or(Error::UnknownParameter(s))
    }
}

impl Serialize for ParameterId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for ParameterId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Quantitative parameter values fed to the effort model, keyed by parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamValues([Option<f64>; 35]);

impl Default for ParamValues {
    fn default() -> Self {
        Self([None; 35])
    }
}

impl ParamValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: ParameterId) -> Result<f64> {
        self.0[id.index() - 1].ok_or(Error::MissingParameter(id))
    }

    pub fn try_get(&self, id: ParameterId) -> Option<f64> {
        self.0[id.index() - 1]
    }

    pub fn set(&mut self, id: ParameterId, value: f64) {
        self.0[id.index() - 1] = Some(value);
    }

    pub fn with(mut self, id: ParameterId, value: f64) -> Self {
        self.set(id, value);
        self
    }

    pub fn remove(&mut self, id: ParameterId) {
        self.0[id.index() - 1] = None;
    }

    pub fn iter(&self) -> impl Iterator<Item = (ParameterId, f64)> + '_ {
        ParameterId::ALL
            .iter()
            .zip(self.0.iter())
            .filter_map(|(&id, v)| v.map(|v| (id, v)))
    }
}

impl FromIterator<(ParameterId, f64)> for ParamValues {
    fn from_iter<I: IntoIterator<Item = (ParameterId, f64)>>(iter: I) -> Self {
        let mut values = Self::new();
        for (id, v) in iter {
            values.set(id, v);
        }
        values
    }
}
