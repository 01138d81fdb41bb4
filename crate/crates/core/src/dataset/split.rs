//! Train/test protocols for the case studies.

use std::fmt;
use std::str::FromStr;

use crate::engine;
use crate::error::{Error, Result};
use crate::experiment::magnitude_relative_error;
use crate::fuzzy::bank_translate;
use crate::project::SeerProject;
use crate::table::ValueTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    /// Train on projects with baseline MRE at most 50%, test on all.
    C1,
    /// Train and test on all projects.
    C2,
    /// Train on projects with baseline MRE at most 150%, test on all.
    C3,
    /// Train on projects 24..=93, test on 1..=23.
    C4_1,
    /// Train on projects 47..=93, test on 1..=46.
    C4_2,
    /// Train on projects whose baseline MRE is at most `max_mre`, test on all.
    BaselineMre { max_mre: f64 },
    /// 1-based inclusive index ranges.
    IndexRanges {
        train: (usize, usize),
        test: (usize, usize),
    },
}

impl Protocol {
    fn resolved(self) -> Protocol {
        match self {
            Protocol::C1 => Protocol::BaselineMre { max_mre: 0.5 },
            Protocol::C3 => Protocol::BaselineMre { max_mre: 1.5 },
            Protocol::C4_1 => Protocol::IndexRanges {
                train: (24, 93),
                test: (1, 23),
            },
            Protocol::C4_2 => Protocol::IndexRanges {
                train: (47, 93),
                test: (1, 46),
            },
            other => other,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Protocol::C1 => f.write_str("C1"),
            Protocol::C2 => f.write_str("C2"),
            Protocol::C3 => f.write_str("C3"),
            Protocol::C4_1 => f.write_str("C4-1"),
            Protocol::C4_2 => f.write_str("C4-2"),
            Protocol::BaselineMre { max_mre } => write!(f, "mre:{max_mre}"),
            Protocol::IndexRanges { train, test } => {
                write!(f, "ranges:{}-{}:{}-{}", train.0, train.1, test.0, test.1)
            }
        }
    }
}

impl FromStr for Protocol {
    type Err = Error;

    /// `c1`, `c2`, `c3`, `c4-1`, `c4-2`, `mre:<max>` or
    /// `ranges:<a>-<b>:<c>-<d>` (train, then test; 1-based inclusive).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bad = || Error::Protocol(format!("cannot parse protocol `{s}`"));
        Ok(match lower.as_str() {
            "c1" => Protocol::C1,
            "c2" => Protocol::C2,
            "c3" => Protocol::C3,
            "c4-1" | "c4_1" => Protocol::C4_1,
            "c4-2" | "c4_2" => Protocol::C4_2,
            _ => {
                if let Some(rest) = lower.strip_prefix("mre:") {
                    let max_mre: f64 = rest.parse().map_err(|_| bad())?;
                    if !(max_mre >= 0.0) {
                        return Err(bad());
                    }
                    Protocol::BaselineMre { max_mre }
                } else if let Some(rest) = lower.strip_prefix("ranges:") {
                    let range = |t: &str| -> Result<(usize, usize)> {
                        let (a, b) = t.split_once('-').ok_or_else(bad)?;
                        Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
                    };
                    let (train, test) = rest.split_once(':').ok_or_else(bad)?;
                    Protocol::IndexRanges {
                        train: range(train)?,
                        test: range(test)?,
                    }
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

fn slice_range(projects: &[SeerProject], (first, last): (usize, usize)) -> Result<Vec<SeerProject>> {
    if first == 0 || first > last || last > projects.len() {
        return Err(Error::Protocol(format!(
            "range {first}-{last} does not fit a dataset of {} projects",
            projects.len()
        )));
    }
    Ok(projects[first - 1..last].to_vec())
}

pub fn baseline_mre(project: &SeerProject, table: &ValueTable) -> Result<f64> {
    let values = bank_translate(project, table)?;
    let estimate = engine::estimate(project.size, &values)?.effort;
    magnitude_relative_error(estimate, project.actual_effort)
}

/// Splits `projects` into `(training, testing)`. Baseline MREs use the
/// uncalibrated `table`.
pub fn split(
    projects: &[SeerProject],
    protocol: Protocol,
    table: &ValueTable,
) -> Result<(Vec<SeerProject>, Vec<SeerProject>)> {
    let (training, testing) = match protocol.resolved() {
        Protocol::C2 => (projects.to_vec(), projects.to_vec()),
        Protocol::BaselineMre { max_mre } => {
            let mut training = Vec::new();
            for project in projects {
                if baseline_mre(project, table)? <= max_mre {
                    training.push(project.clone());
                }
            }
            (training, projects.to_vec())
        }
        Protocol::IndexRanges { train, test } => {
            (slice_range(projects, train)?, slice_range(projects, test)?)
        }
        _ => unreachable!("resolved protocols are C2, BaselineMre or IndexRanges"),
    };
    if training.is_empty() {
        return Err(Error::Protocol(format!("{protocol} leaves the training set empty")));
    }
    Ok((training, testing))
}
