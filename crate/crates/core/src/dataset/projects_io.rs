//! Canonical project files: one row (or JSON object) per [`SeerProject`].
//!
//! CSV header: `id,size,actual_effort,sibr,weight` followed by the 34 rated
//! symbols in index order. Rating cells accept coordinates or labels; a
//! missing rating column defaults to Nominal, and missing `sibr` / `weight`
//! columns default to 0 and 1.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::parameter::ParameterId;
use crate::project::{ProjectRecord, SeerProject};
use crate::rating::parse_rating;

pub fn write_projects_csv(projects: &[SeerProject]) -> String {
    let mut out = String::from("id,size,actual_effort,sibr,weight");
    for id in ParameterId::rated() {
        out.push(',');
        out.push_str(id.symbol());
    }
    out.push('\n');
    for p in projects {
        out.push_str(&format!(
            "{},{},{},{},{}",
            csv_field(&p.id),
            p.size,
            p.actual_effort,
            p.sibr,
            p.weight
        ));
        for x in &p.ratings {
            out.push_str(&format!(",{x}"));
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn read_projects_csv<R: Read>(reader: R) -> Result<Vec<SeerProject>> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let required = |name: &str| {
        column(name).ok_or_else(|| Error::Schema(format!("missing required column `{name}`")))
    };
    let (id_col, size_col, effort_col) = (required("id")?, required("size")?, required("actual_effort")?);
    let (sibr_col, weight_col) = (column("sibr"), column("weight"));
    let mut rating_cols = Vec::new();
    for (i, header) in headers.iter().enumerate() {
        if ["id", "size", "actual_effort", "sibr", "weight"]
            .iter()
            .any(|m| m.eq_ignore_ascii_case(header))
        {
            continue;
        }
        let id: ParameterId = header
            .parse()
            .map_err(|_| Error::Schema(format!("unknown column `{header}`")))?;
        if !id.is_rated() {
            return Err(Error::Schema(format!("{id} is not a rated parameter")));
        }
        rating_cols.push((i, id));
    }

    let mut projects = Vec::new();
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
        let mut project = SeerProject::nominal(
            cell(id_col),
            number("size", size_col)?,
            number("actual_effort", effort_col)?,
        );
        if let Some(i) = sibr_col.filter(|&i| !cell(i).is_empty()) {
            project.sibr = number("sibr", i)?;
        }
        if let Some(i) = weight_col.filter(|&i| !cell(i).is_empty()) {
            project.weight = number("weight", i)?;
        }
        for &(i, id) in &rating_cols {
            if cell(i).is_empty() {
                continue;
            }
            let x = parse_rating(cell(i)).map_err(|e| fail(format!("{id}: {e}")))?;
            project.set_rating(id, x).map_err(|e| fail(e.to_string()))?;
        }
        project.validate().map_err(|e| fail(e.to_string()))?;
        projects.push(project);
    }
    Ok(projects)
}

pub fn load_projects_csv(path: impl AsRef<Path>) -> Result<Vec<SeerProject>> {
    read_projects_csv(std::fs::File::open(path)?)
}

pub fn projects_to_json(projects: &[SeerProject]) -> Result<String> {
    let records: Vec<ProjectRecord> = projects.iter().map(SeerProject::to_record).collect();
    Ok(serde_json::to_string_pretty(&records)?)
}

pub fn projects_from_json(text: &str) -> Result<Vec<SeerProject>> {
    let records: Vec<ProjectRecord> = serde_json::from_str(text)?;
    records.iter().map(SeerProject::from_record).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn csv_and_json_round_trip(
            size in 1.0f64..1e6,
            effort in 0.01f64..1e3,
            sibr in 0.0f64..=1.0,
            ratings in proptest::collection::vec(1.0f64..=18.0, 34),
        ) {
            let mut p = SeerProject::nominal("a,\"b\"", size, effort);
            p.sibr = sibr;
            p.ratings.copy_from_slice(&ratings);
            let projects = vec![p, SeerProject::nominal("plain", 10.0, 1.0)];
            let csv = write_projects_csv(&projects);
            prop_assert_eq!(&read_projects_csv(csv.as_bytes()).unwrap(), &projects);
            let json = projects_to_json(&projects).unwrap();
            prop_assert_eq!(&projects_from_json(&json).unwrap(), &projects);
        }
    }

    #[test]
    fn labels_and_missing_columns() {
        let text = "id,size,actual_effort,ACAP,TOOL\nx,1000,2,Hi,8.5\n";
        let projects = read_projects_csv(text.as_bytes()).unwrap();
        assert_eq!(projects[0].rating(ParameterId::Acap), 11.0);
        assert_eq!(projects[0].rating(ParameterId::Tool), 8.5);
        assert_eq!(projects[0].rating(ParameterId::Test), 8.0);
        assert_eq!(projects[0].weight, 1.0);
    }

    #[test]
    fn bad_rows_are_reported() {
        let text = "id,size,actual_effort,ACAP\nx,1000,2,Huge\n";
        assert!(matches!(read_projects_csv(text.as_bytes()), Err(Error::Parse { row: 1, .. })));
        let text = "id,size,actual_effort,FOO\nx,1000,2,0.5\n";
        assert!(matches!(read_projects_csv(text.as_bytes()), Err(Error::Schema(_))));
    }
}
