//! Single-input ANFIS sub-models that translate a rating coordinate into a
//! quantitative parameter value.
//!
//! Each rated parameter has 18 Takagi-Sugeno rules of the form
//! "IF rating is level r THEN value = P_r". Antecedents use fixed unit-width
//! triangular memberships centred on the grid points, so with one antecedent
//! per rule the firing strength equals the membership grade and the
//! normalized weighted sum reduces to linear interpolation between the two
//! neighbouring consequents.

use crate::error::{Error, Result};
use crate::parameter::{ParamValues, ParameterId};
use crate::project::SeerProject;
use crate::rating::{LEVELS, MAX_COORDINATE, MIN_COORDINATE};
use crate::table::{Row, ValueTable};

/// Domain on which a single membership function is defined.
pub const MEMBERSHIP_DOMAIN: (f64, f64) = (0.0, LEVELS as f64 + 1.0);

/// Triangular membership grade of `x` in rule `level` (1-based).
pub fn membership(level: usize, x: f64) -> Result<f64> {
    if !(1..=LEVELS).contains(&level) {
        return Err(Error::LevelRange(level));
    }
    let (lo, hi) = MEMBERSHIP_DOMAIN;
    if !(lo..=hi).contains(&x) {
        return Err(Error::InputRange { x, lo, hi });
    }
    Ok(triangle(level as f64, x))
}

fn triangle(r: f64, x: f64) -> f64 {
    if (r - 1.0..=r).contains(&x) {
        x - (r - 1.0)
    } else if (r..=r + 1.0).contains(&x) {
        (r + 1.0) - x
    } else {
        0.0
    }
}

fn check_input(x: f64) -> Result<()> {
    if (MIN_COORDINATE..=MAX_COORDINATE).contains(&x) {
        Ok(())
    } else {
        Err(Error::InputRange {
            x,
            lo: MIN_COORDINATE,
            hi: MAX_COORDINATE,
        })
    }
}

/// Firing strength of every rule; at most two entries are non-zero.
pub fn firing_strengths(x: f64) -> Result<[f64; LEVELS]> {
    check_input(x)?;
    Ok(std::array::from_fn(|r| triangle(r as f64 + 1.0, x)))
}

pub fn normalize(weights: &[f64; LEVELS]) -> Result<[f64; LEVELS]> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateFiring);
    }
    Ok(weights.map(|w| w / total))
}

/// Normalized firing strengths; these are also `dP / dP_r` for each rule.
pub fn rule_weights(x: f64) -> Result<[f64; LEVELS]> {
    normalize(&firing_strengths(x)?)
}

/// Sugeno output: normalized-strength-weighted sum of the rule consequents.
pub fn nf_output(x: f64, row: &Row) -> Result<f64> {
    let weights = rule_weights(x)?;
    Ok(weights.iter().zip(row).map(|(w, p)| w * p).sum())
}

/// Translates every rated coordinate of `project` through its sub-model and
/// passes SIBR through unchanged.
pub fn bank_translate(project: &SeerProject, table: &ValueTable) -> Result<ParamValues> {
    let mut values = ParamValues::new();
    for &id in ParameterId::rated() {
        values.set(id, nf_output(project.rating(id), table.row(id))?);
    }
    values.set(ParameterId::Sibr, project.sibr);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn lerp_oracle(x: f64, row: &Row) -> f64 {
        let lo = x.floor();
        let hi = x.ceil();
        let (y0, y1) = (row[lo as usize - 1], row[hi as usize - 1]);
        if lo == hi {
            y0
        } else {
            y0 + (y1 - y0) * (x - lo) / (hi - lo)
        }
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(5, 5.0).unwrap(), 1.0);
        assert_eq!(membership(5, 4.0).unwrap(), 0.0);
        assert_eq!(membership(5, 4.25).unwrap(), 0.25);
        assert_eq!(membership(5, 5.75).unwrap(), 0.25);
        assert_eq!(membership(5, 7.0).unwrap(), 0.0);
        assert_eq!(membership(1, 0.0).unwrap(), 0.0);
        assert_eq!(membership(18, 19.0).unwrap(), 0.0);
    }

    #[test]
    fn membership_range_errors() {
        assert!(matches!(membership(5, -0.1), Err(Error::InputRange { .. })));
        assert!(matches!(membership(5, 19.1), Err(Error::InputRange { .. })));
        assert!(matches!(membership(0, 1.0), Err(Error::LevelRange(0))));
        assert!(matches!(membership(19, 1.0), Err(Error::LevelRange(19))));
    }

    #[test]
    fn firing_strength_examples() {
        let w = firing_strengths(8.0).unwrap();
        assert_eq!(w[7], 1.0);
        assert_eq!(w.iter().filter(|&&v| v != 0.0).count(), 1);

        let w = firing_strengths(8.3).unwrap();
        assert_relative_eq!(w[7], 0.7, max_relative = 1e-12);
        assert_relative_eq!(w[8], 0.3, max_relative = 1e-12);
        assert_eq!(w.iter().filter(|&&v| v != 0.0).count(), 2);

        // Outside [1, 18] the triangles no longer partition unity.
        assert!(firing_strengths(0.5).is_err());
        assert!(firing_strengths(18.5).is_err());
    }

    #[test]
    fn normalize_examples() {
        let mut one_hot = [0.0; LEVELS];
        one_hot[4] = 1.0;
        assert_eq!(normalize(&one_hot).unwrap(), one_hot);

        let mut pair = [0.0; LEVELS];
        pair[3] = 0.7;
        pair[4] = 0.3;
        assert_eq!(normalize(&pair).unwrap(), pair);

        let mut twos = [0.0; LEVELS];
        twos[0] = 2.0;
        twos[1] = 2.0;
        let n = normalize(&twos).unwrap();
        assert_eq!((n[0], n[1]), (0.5, 0.5));
        assert!(n[2..].iter().all(|&v| v == 0.0));

        assert!(matches!(normalize(&[0.0; LEVELS]), Err(Error::DegenerateFiring)));
    }

    #[test]
    fn output_examples() {
        let mut row: Row = std::array::from_fn(|r| 1.0 + r as f64 * 0.1);
        assert_eq!(nf_output(8.0, &row).unwrap(), row[7]);
        row[7] = 1.0;
        row[8] = 1.2;
        assert_relative_eq!(nf_output(8.5, &row).unwrap(), 1.1, max_relative = 1e-15);
    }

    #[test]
    fn bank_translate_nominal_column() {
        let table = ValueTable::synthetic();
        let project = SeerProject::nominal("p", 1000.0, 1.0);
        let values = bank_translate(&project, &table).unwrap();
        for &id in ParameterId::rated() {
            assert_eq!(values.get(id).unwrap(), table.value(id, 8));
        }
        assert_eq!(values.get(ParameterId::Sibr).unwrap(), 0.0);

        let shifted = project.with_rating(ParameterId::Tool, 8.5).unwrap();
        let values2 = bank_translate(&shifted, &table).unwrap();
        for &id in ParameterId::rated() {
            let expected = if id == ParameterId::Tool {
                0.5 * (table.value(id, 8) + table.value(id, 9))
            } else {
                table.value(id, 8)
            };
            assert_relative_eq!(values2.get(id).unwrap(), expected, max_relative = 1e-15);
        }
    }

    proptest! {
        #[test]
        fn output_is_linear_interpolation(
            x in 1.0f64..=18.0,
            mut raw in proptest::collection::vec(0.1f64..5.0, LEVELS),
        ) {
            raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let row: Row = raw.as_slice().try_into().unwrap();
            let y = nf_output(x, &row).unwrap();
            prop_assert!((y - lerp_oracle(x, &row)).abs() <= 1e-12 * y.abs().max(1.0));
            let (min, max) = (row[0], row[LEVELS - 1]);
            prop_assert!(y >= min - 1e-12 && y <= max + 1e-12);
        }

        #[test]
        fn firing_strengths_partition_unity(x in 1.0f64..=18.0) {
            let sum: f64 = firing_strengths(x).unwrap().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn output_preserves_order(
            a in 1.0f64..=18.0,
            b in 1.0f64..=18.0,
            mut raw in proptest::collection::vec(0.1f64..5.0, LEVELS),
        ) {
            raw.sort_by(|p, q| p.partial_cmp(q).unwrap());
            let row: Row = raw.as_slice().try_into().unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(nf_output(lo, &row).unwrap() <= nf_output(hi, &row).unwrap() + 1e-12);
        }
    }
}
