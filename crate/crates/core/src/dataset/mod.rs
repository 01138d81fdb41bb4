//! Historical dataset ingestion and conversion into [`SeerProject`]s.
//!
//! [`SeerProject`]: crate::project::SeerProject

mod mapping;
mod projects_io;
mod raw;
mod split;

pub use mapping::{direct_levels, transfer, transfer_all, MappingRule, MappingTable, ModelMapping, RuleSource};
pub use projects_io::{
    load_projects_csv, projects_from_json, projects_to_json, read_projects_csv, write_projects_csv,
};
pub use raw::{parse_dataset, read_dataset, RawProjectRecord, SourceModel, SourceRating, MONTHS_PER_YEAR};
pub use split::{baseline_mre, split, Protocol};
