//! Historical project records in their source (COCOMO 81 / COCOMO 87) form.
//!
//! # CSV layout
//!
//! The first row is a header. Required columns: `id`, `model`
//! (`COCOMO81` or `COCOMO87`), `size_kloc`, `effort`. Optional columns:
//! `unit` (`pm` / `person-months` or `py` / `person-years`, default
//! person-months), `mode`, `sibr` (fraction in `[0, 1]`). Every other
//! column must be a cost-driver name of either source model; cells hold
//! source ratings (`VL`, `L`, `N`, `H`, `VH`, `XH`) or are left empty when
//! the driver was not rated. Row numbers in errors count data rows from 1.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MONTHS_PER_YEAR: f64 = 12.0;

const COCOMO81_DRIVERS: [&str; 15] = [
    "RELY", "DATA", "CPLX", "TIME", "STOR", "VIRT", "TURN", "ACAP", "AEXP", "PCAP", "VEXP",
    "LEXP", "MODP", "TOOL", "SCED",
];

const COCOMO87_DRIVERS: [&str; 17] = [
    "RELY", "DATA", "CPLX", "RUSE", "TIME", "STOR", "VMVH", "VMVT", "TURN", "ACAP", "AEXP",
    "PCAP", "VEXP", "LEXP", "MODP", "TOOL", "SCED",
];

const META_COLUMNS: [&str; 7] = ["id", "model", "size_kloc", "effort", "unit", "mode", "sibr"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SourceModel {
    #[serde(rename = "COCOMO81")]
    Cocomo81,
    #[serde(rename = "COCOMO87")]
    Cocomo87,
}

impl SourceModel {
    pub const ALL: [SourceModel; 2] = [SourceModel::Cocomo81, SourceModel::Cocomo87];

    pub fn drivers(self) -> &'static [&'static str] {
        match self {
            SourceModel::Cocomo81 => &COCOMO81_DRIVERS,
            SourceModel::Cocomo87 => &COCOMO87_DRIVERS,
        }
    }

    pub fn has_driver(self, name: &str) -> bool {
        self.drivers().contains(&name)
    }

    pub fn key(self) -> &'static str {
        match self {
            SourceModel::Cocomo81 => "cocomo81",
            SourceModel::Cocomo87 => "cocomo87",
        }
    }
}

impl fmt::Display for SourceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceModel::Cocomo81 => "COCOMO81",
            SourceModel::Cocomo87 => "COCOMO87",
        })
    }
}

impl FromStr for SourceModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace([' ', '-', '_'], "").as_str() {
            "COCOMO81" | "81" => Ok(SourceModel::Cocomo81),
            "COCOMO87" | "87" => Ok(SourceModel::Cocomo87),
            other => Err(Error::Schema(format!("unknown source model `{other}`"))),
        }
    }
}

/// Six-level COCOMO rating scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SourceRating {
    VeryLow,
    Low,
    Nominal,
    High,
    VeryHigh,
    ExtraHigh,
}

impl SourceRating {
    pub const ALL: [SourceRating; 6] = [
        SourceRating::VeryLow,
        SourceRating::Low,
        SourceRating::Nominal,
        SourceRating::High,
        SourceRating::VeryHigh,
        SourceRating::ExtraHigh,
    ];

    pub fn code(self) -> &'static str {
        match self {
            SourceRating::VeryLow => "VL",
            SourceRating::Low => "L",
            SourceRating::Nominal => "N",
            SourceRating::High => "H",
            SourceRating::VeryHigh => "VH",
            SourceRating::ExtraHigh => "XH",
        }
    }
}

impl fmt::Display for SourceRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for SourceRating {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace([' ', '_', '-'], "");
        Ok(match key.as_str() {
            "VL" | "VERYLOW" => SourceRating::VeryLow,
            "L" | "LO" | "LOW" => SourceRating::Low,
            "N" | "NOM" | "NOMINAL" => SourceRating::Nominal,
            "H" | "HI" | "HIGH" => SourceRating::High,
            "VH" | "VERYHIGH" => SourceRating::VeryHigh,
            "XH" | "EH" | "EXTRAHIGH" => SourceRating::ExtraHigh,
            _ => return Err(Error::UnknownLabel(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawProjectRecord {
    pub id: String,
    pub source_model: SourceModel,
    pub size_kloc: f64,
    /// Actual effort, normalized to person-years.
    pub actual_effort: f64,
    pub mode: Option<String>,
    pub sibr: Option<f64>,
    pub ratings: BTreeMap<String, SourceRating>,
}

pub fn parse_dataset<R: Read>(reader: R) -> Result<Vec<RawProjectRecord>> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    for required in ["id", "model", "size_kloc", "effort"] {
        if column(required).is_none() {
            return Err(Error::Schema(format!("missing required column `{required}`")));
        }
    }
    let mut drivers = Vec::new();
    for (i, header) in headers.iter().enumerate() {
        if META_COLUMNS.iter().any(|m| m.eq_ignore_ascii_case(header)) {
            continue;
        }
        let name = header.to_ascii_uppercase();
        if !SourceModel::ALL.iter().any(|m| m.has_driver(&name)) {
            return Err(Error::Schema(format!("unknown driver column `{header}`")));
        }
        drivers.push((i, name));
    }
    let (id_col, model_col) = (column("id").unwrap(), column("model").unwrap());
    let (size_col, effort_col) = (column("size_kloc").unwrap(), column("effort").unwrap());
    let (unit_col, mode_col, sibr_col) = (column("unit"), column("mode"), column("sibr"));

    let mut records = Vec::new();
    for (index, row) in csv.records().enumerate() {
        let row_number = index + 1;
        let fail = |detail: String| Error::Parse {
            row: row_number,
            detail,
        };
        let row = row.map_err(|e| fail(e.to_string()))?;
        let cell = |i: usize| row.get(i).unwrap_or("");
        let number = |name: &str, i: usize| {
            cell(i)
                .parse::<f64>()
                .map_err(|_| fail(format!("{name} `{}` is not a number", cell(i))))
        };

        let id = cell(id_col).to_string();
        if id.is_empty() {
            return Err(fail("empty id".into()));
        }
        let source_model: SourceModel = cell(model_col).parse().map_err(|e: Error| fail(e.to_string()))?;
        let size_kloc = number("size_kloc", size_col)?;
        if !(size_kloc > 0.0 && size_kloc.is_finite()) {
            return Err(fail(format!("size_kloc {size_kloc} must be positive")));
        }
        let effort = number("effort", effort_col)?;
        if !(effort > 0.0 && effort.is_finite()) {
            return Err(fail(format!("effort {effort} must be positive")));
        }
        let unit = unit_col.map(cell).unwrap_or("");
        let actual_effort = match unit.to_ascii_lowercase().as_str() {
            "" | "pm" | "person-months" | "months" => effort / MONTHS_PER_YEAR,
            "py" | "person-years" | "years" => effort,
            other => return Err(fail(format!("unknown effort unit `{other}`"))),
        };
        let mode = mode_col.map(cell).filter(|m| !m.is_empty()).map(str::to_string);
        let sibr = match sibr_col.map(cell).filter(|s| !s.is_empty()) {
            None => None,
            Some(_) => {
                let s = number("sibr", sibr_col.unwrap())?;
                if !(0.0..=1.0).contains(&s) {
                    return Err(fail(format!("sibr {s} outside [0, 1]")));
                }
                Some(s)
            }
        };

        let mut ratings = BTreeMap::new();
        for (i, name) in &drivers {
            let text = cell(*i);
            if text.is_empty() {
                continue;
            }
            if !source_model.has_driver(name) {
                return Err(fail(format!("driver {name} is not part of {source_model}")));
            }
            let rating: SourceRating = text
                .parse()
                .map_err(|_| fail(format!("rating `{text}` for {name} is not on the source scale")))?;
            ratings.insert(name.clone(), rating);
        }
        records.push(RawProjectRecord {
            id,
            source_model,
            size_kloc,
            actual_effort,
            mode,
            sibr,
            ratings,
        });
    }
    Ok(records)
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Vec<RawProjectRecord>> {
    parse_dataset(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
id,model,size_kloc,effort,unit,mode,ACAP,PCAP,VMVH
a,COCOMO81,10,120,pm,organic,H,N,
b,COCOMO87,5.5,2,py,embedded,N,VH,H
c,81,100,1200,,,L,,
";

    #[test]
    fn parses_well_formed_rows() {
        let records = parse_dataset(SAMPLE.as_bytes()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[0].actual_effort, 10.0);
        assert_eq!(records[0].ratings["ACAP"], SourceRating::High);
        assert!(!records[0].ratings.contains_key("VMVH"));
        assert_eq!(records[1].actual_effort, 2.0);
        assert_eq!(records[1].source_model, SourceModel::Cocomo87);
        assert_eq!(records[1].ratings["VMVH"], SourceRating::High);
        assert_eq!(records[2].actual_effort, 100.0);
        assert_eq!(records[2].mode, None);
    }

    #[test]
    fn rating_off_scale_names_row_and_label() {
        let text = "id,model,size_kloc,effort,ACAP\na,COCOMO81,1,1,N\nb,COCOMO81,1,1,Huge\n";
        let err = parse_dataset(text.as_bytes()).unwrap_err();
        match &err {
            Error::Parse { row, detail } => {
                assert_eq!(*row, 2);
                assert!(detail.contains("Huge"), "{detail}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_driver_column_is_schema_error() {
        let text = "id,model,size_kloc,effort,FOO\na,COCOMO81,1,1,N\n";
        assert!(matches!(parse_dataset(text.as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn driver_outside_source_model_is_rejected() {
        let text = "id,model,size_kloc,effort,VMVH\na,COCOMO81,1,1,H\n";
        assert!(matches!(parse_dataset(text.as_bytes()), Err(Error::Parse { row: 1, .. })));
    }

    #[test]
    fn malformed_numbers_report_row() {
        let text = "id,model,size_kloc,effort\na,COCOMO81,1,1\nb,COCOMO81,x,1\n";
        assert!(matches!(parse_dataset(text.as_bytes()), Err(Error::Parse { row: 2, .. })));
        let text = "id,model,size_kloc,effort\na,COCOMO81,1,-3\n";
        assert!(matches!(parse_dataset(text.as_bytes()), Err(Error::Parse { row: 1, .. })));
    }
}
