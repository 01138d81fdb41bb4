//! Accuracy metrics over `(estimated, actual)` effort pairs.

use crate::error::{Error, Result};

fn check_actual(actual: f64) -> Result<()> {
    if actual > 0.0 && actual.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("relative error", format!("actual effort {actual} must be positive")))
    }
}

fn check_pairs(pairs: &[(f64, f64)], what: &str) -> Result<()> {
    if pairs.is_empty() {
        return Err(Error::domain(what, "no projects to evaluate"));
    }
    Ok(())
}

/// `(estimated - actual) / actual`, keeping the sign.
pub fn relative_error(estimated: f64, actual: f64) -> Result<f64> {
    check_actual(actual)?;
    Ok((estimated - actual) / actual)
}

pub fn magnitude_relative_error(estimated: f64, actual: f64) -> Result<f64> {
    relative_error(estimated, actual).map(f64::abs)
}

pub fn mmre(pairs: &[(f64, f64)]) -> Result<f64> {
    check_pairs(pairs, "MMRE")?;
    let mut sum = 0.0;
    for &(e, a) in pairs {
        sum += magnitude_relative_error(e, a)?;
    }
    Ok(sum / pairs.len() as f64)
}

/// Fraction of pairs whose MRE is at most `level`.
pub fn pred(pairs: &[(f64, f64)], level: f64) -> Result<f64> {
    check_pairs(pairs, "PRED")?;
    if !(level >= 0.0) {
        return Err(Error::domain("PRED", format!("level {level} must be non-negative")));
    }
    let mut hits = 0usize;
    for &(e, a) in pairs {
        if magnitude_relative_error(e, a)? <= level {
            hits += 1;
        }
    }
    Ok(hits as f64 / pairs.len() as f64)
}
