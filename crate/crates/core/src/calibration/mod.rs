//! Gradient-descent calibration of the value table against historical
//! projects, with monotone projection of every row.

mod gradient;
mod isotonic;

pub use gradient::{
    effort_partials, grad_effort_wrt_value, grad_loss_wrt_consequent, loss, loss_and_gradient,
    TableGradient,
};
pub use isotonic::{enforce_monotone, isotonic_fit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::project::SeerProject;
use crate::table::ValueTable;

/// When rows are projected back onto their monotone direction.
///
/// Descent is full-batch, so one epoch is one gradient step and both
/// policies project the same candidate table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintPolicy {
    #[default]
    ProjectEachEpoch,
    ProjectEachStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Stop once the relative loss decrease of an epoch falls below this.
    pub tolerance: f64,
    pub constraint_policy: ConstraintPolicy,
    pub seed: u64,
    /// Trained values are floored here to keep them positive.
    pub value_floor: f64,
    /// Halve the learning rate whenever a step would raise the loss.
    pub backtracking: bool,
    pub max_halvings: u32,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            max_epochs: 500,
            tolerance: 1e-6,
            constraint_policy: ConstraintPolicy::default(),
            seed: 0,
            value_floor: 1e-6,
            backtracking: true,
            max_halvings: 40,
        }
    }
}

impl CalibrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate {} must be finite and non-negative",
                self.learning_rate
            )));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::Config(format!("tolerance {} must be non-negative", self.tolerance)));
        }
        if !(self.value_floor > 0.0 && self.value_floor.is_finite()) {
            return Err(Error::Config(format!("value floor {} must be positive", self.value_floor)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// `max_epochs` is zero.
    NoEpochs,
    MaxEpochs,
    /// Relative loss decrease fell below the tolerance.
    Converged,
    /// Loss reached exactly zero.
    ZeroLoss,
    /// No learning rate down to the halving limit decreased the loss.
    StepExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Loss of the table at the end of this epoch.
    pub loss: f64,
    /// Learning rate of the accepted step.
    pub learning_rate: f64,
    pub halvings: u32,
    /// Rows changed by the monotone projection.
    pub projected_rows: usize,
    /// Values raised to the floor.
    pub floored_values: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingTrace {
    pub initial_loss: f64,
    pub epochs: Vec<EpochRecord>,
    pub stop: StopReason,
    pub table: ValueTable,
}

impl TrainingTrace {
    pub fn final_loss(&self) -> f64 {
        self.epochs.last().map_or(self.initial_loss, |e| e.loss)
    }

    pub fn losses(&self) -> Vec<f64> {
        std::iter::once(self.initial_loss)
            .chain(self.epochs.iter().map(|e| e.loss))
            .collect()
    }

    pub fn floor_activations(&self) -> usize {
        self.epochs.iter().map(|e| e.floored_values).sum()
    }

    /// Per-epoch trace as CSV, epoch 0 being the initial table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,loss,learning_rate,halvings,projected_rows,floored_values\n");
        out.push_str(&format!("0,{},,,,\n", self.initial_loss));
        for e in &self.epochs {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                e.epoch, e.loss, e.learning_rate, e.halvings, e.projected_rows, e.floored_values
            ));
        }
        out
    }
}

struct Candidate {
    table: ValueTable,
    projected_rows: usize,
    floored_values: usize,
}

fn step(table: &ValueTable, gradient: &TableGradient, rate: f64, floor: f64) -> Candidate {
    let mut next = table.clone();
    let mut floored_values = 0;
    let mut projected_rows = 0;
    let directions = *table.directions();
    for ((row, grad), direction) in next.rows_mut().iter_mut().zip(gradient).zip(directions) {
        for (v, g) in row.iter_mut().zip(grad) {
            *v -= rate * g;
            if *v < floor {
                *v = floor;
                floored_values += 1;
            }
        }
        let projected = enforce_monotone(row, direction);
        if projected != *row {
            projected_rows += 1;
            *row = projected;
        }
    }
    Candidate {
        table: next,
        projected_rows,
        floored_values,
    }
}

/// Full-batch projected gradient descent on the consequent values.
///
/// Each epoch computes the gradient at the epoch-start table, takes one step
/// for every consequent, floors and projects every row, and accepts the
/// result. With backtracking enabled a step that would raise the loss (or
/// make it non-finite) is retried at half the learning rate, and the reduced
/// rate carries over to later epochs.
pub fn train(projects: &[SeerProject], table: &ValueTable, config: &CalibrationConfig) -> Result<TrainingTrace> {
    config.validate()?;
    if projects.is_empty() {
        return Err(Error::Config("training set is empty".into()));
    }
    let violations = table.validate();
    if let Some(first) = violations.first() {
        return Err(Error::Table(format!(
            "{} violation(s), first: {first}",
            violations.len()
        )));
    }
    for project in projects {
        project.validate()?;
    }

    let initial_loss = loss(projects, table)?;
    let mut trace = TrainingTrace {
        initial_loss,
        epochs: Vec::new(),
        stop: StopReason::NoEpochs,
        table: table.clone(),
    };
    if config.max_epochs == 0 {
        return Ok(trace);
    }
    trace.stop = StopReason::MaxEpochs;

    let mut rate = config.learning_rate;
    for epoch in 1..=config.max_epochs {
        let (current_loss, gradient) = loss_and_gradient(projects, &trace.table)?;
        if current_loss == 0.0 {
            trace.stop = StopReason::ZeroLoss;
            break;
        }
        let mut trial_rate = rate;
        let mut halvings = 0;
        let (candidate, candidate_loss) = loop {
            let candidate = step(&trace.table, &gradient, trial_rate, config.value_floor);
            let candidate_loss = loss(projects, &candidate.table).unwrap_or(f64::NAN);
            let worse = !candidate_loss.is_finite() || candidate_loss > current_loss;
            if config.backtracking && worse && halvings < config.max_halvings {
                trial_rate *= 0.5;
                halvings += 1;
                continue;
            }
            break (candidate, candidate_loss);
        };

        if !candidate_loss.is_finite() {
            return Err(Error::Diverged {
                epoch,
                trace: Box::new(trace),
            });
        }
        if config.backtracking && candidate_loss > current_loss {
            trace.stop = StopReason::StepExhausted;
            break;
        }
        if config.backtracking {
            rate = trial_rate;
        }

        trace.table = candidate.table;
        trace.epochs.push(EpochRecord {
            epoch,
            loss: candidate_loss,
            learning_rate: trial_rate,
            halvings,
            projected_rows: candidate.projected_rows,
            floored_values: candidate.floored_values,
        });

        if candidate_loss == 0.0 {
            trace.stop = StopReason::ZeroLoss;
            break;
        }
        if (current_loss - candidate_loss) / current_loss < config.tolerance {
            trace.stop = StopReason::Converged;
            break;
        }
    }
    Ok(trace)
}
