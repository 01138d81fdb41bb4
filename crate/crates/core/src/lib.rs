//! SEER-SEM effort estimation with a neuro-fuzzy bank for calibrating the
//! parameter-value table against historical projects.
//!
//! The pipeline: rate a [`SeerProject`], translate its ratings into
//! parameter values through the [`fuzzy`] bank over a [`ValueTable`], and
//! feed those values to the [`engine`]. [`calibration::train`] adjusts the
//! table by projected gradient descent, [`dataset`] turns COCOMO-style
//! records into projects, and [`experiment`] scores tables and runs case
//! studies.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod fuzzy;
pub mod parameter;
pub mod project;
pub mod rating;
pub mod table;

pub use engine::EffortBreakdown;
pub use error::{Error, Result};
pub use parameter::{ParamValues, ParameterId};
pub use project::SeerProject;
pub use rating::RatingLevel;
pub use table::{Direction, ValueTable};
