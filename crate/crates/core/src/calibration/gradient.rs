//! Relative-error loss and its analytic gradient with respect to every
//! consequent value `P_ir` in the table.
//!
//! The chain is `dLoss/dP_ir = sum_n w_n (E_n - A_n) / A_n^2 * dE_n/dP_i * dP_i/dP_ir`
//! where `dP_i/dP_ir` is the normalized firing strength of rule `r` and
//! `dE_n/dP_i` comes from [`effort_partials`].

use crate::engine::{
    self, compute_combined, Combined, EffortBreakdown, ADJUSTMENT_SINGLES, CTBX_REFERENCE,
    CTBX_SINGLES, SIZE_EXPONENT, STAFFING_EXPONENT, TECHNOLOGY_SLOPE,
};
use crate::error::{Error, Result};
use crate::fuzzy::{bank_translate, rule_weights};
use crate::parameter::{ParamValues, ParameterId, RATED};
use crate::project::SeerProject;
use crate::rating::LEVELS;
use crate::table::{Row, ValueTable};

/// Gradient of the loss with the same shape as the table.
pub type TableGradient = [Row; RATED];

/// Effort and its partial derivative with respect to each rated value,
/// indexed by table row. SIBR is held fixed.
pub fn effort_partials(size: f64, values: &ParamValues) -> Result<(EffortBreakdown, [f64; RATED])> {
    use ParameterId::*;

    let breakdown = engine::estimate(size, values)?;
    let effort = breakdown.effort;
    let turn = values.get(Turn)?;
    let sibr = values.try_get(Sibr).unwrap_or(0.0);
    let mut partials = [0.0; RATED];
    let mut put = |id: ParameterId, v: f64| partials[id.row().expect("rated")] = v;

    // d ln E / d ln ctbx
    let ctbx_elasticity = SIZE_EXPONENT * TECHNOLOGY_SLOPE / (5.0 * turn);
    for id in CTBX_SINGLES {
        put(id, effort * ctbx_elasticity / values.get(id)?);
    }
    let (aexp, appl) = (values.get(Aexp)?, values.get(Appl)?);
    let aexpappl = compute_combined(Combined::AexpAppl, aexp, appl)?;
    let decay = (-0.95977 * aexp / appl).exp();
    put(Aexp, effort * ctbx_elasticity * (-0.47 * 0.95977 * decay / appl) / aexpappl);
    put(Appl, effort * ctbx_elasticity * (0.47 * 0.95977 * aexp * decay / (appl * appl)) / aexpappl);

    let log_ratio = (breakdown.ctbx / CTBX_REFERENCE).ln();
    put(Turn, -SIZE_EXPONENT * effort * TECHNOLOGY_SLOPE * log_ratio / (5.0 * turn * turn));

    put(D, STAFFING_EXPONENT * effort / values.get(D)?);

    for id in ADJUSTMENT_SINGLES {
        put(id, SIZE_EXPONENT * effort / values.get(id)?);
    }

    for kind in Combined::ADJUSTMENT {
        let (first, second) = kind.operands();
        let a = if kind == Combined::SibrReus { sibr } else { values.get(first)? };
        let b = values.get(second)?;
        let factor = compute_combined(kind, a, b)?;
        let (d_first, d_second) = combined_partials(kind, a, b);
        let scale = SIZE_EXPONENT * effort / factor;
        if first.is_rated() {
            put(first, scale * d_first);
        }
        put(second, scale * d_second);
    }
    Ok((breakdown, partials))
}

/// Partial derivatives of a combined factor with respect to its two operands.
fn combined_partials(kind: Combined, a: f64, b: f64) -> (f64, f64) {
    // Shared shape 1 + (c0 + c1 a) exp(-3 b / a).
    let saturating = |c0: f64, c1: f64| {
        let decay = (-3.0 * b / a).exp();
        let amplitude = c0 + c1 * a;
        (
            c1 * decay + amplitude * decay * 3.0 * b / (a * a),
            -amplitude * 3.0 / a * decay,
        )
    };
    match kind {
        Combined::AexpAppl => {
            let decay = (-0.95977 * a / b).exp();
            (-0.47 * 0.95977 * decay / b, 0.47 * 0.95977 * a * decay / (b * b))
        }
        Combined::LangLexp => saturating(0.11, 0.085),
        Combined::TsysTexp => saturating(0.035, 0.025),
        Combined::DsysDexp => saturating(0.06, 0.05),
        Combined::PsysPexp => {
            if a == 0.0 {
                return (0.0, 0.0);
            }
            let decay = (-3.0 * b / a).exp();
            let base = 0.91f64.powf(a) + 0.23 * a * decay;
            let outer = 0.833 * base.powf(0.833 - 1.0);
            let d_base_a = 0.91f64.ln() * 0.91f64.powf(a) + 0.23 * decay * (1.0 + 3.0 * b / a);
            let d_base_b = -0.69 * decay;
            (outer * d_base_a, outer * d_base_b)
        }
        Combined::SibrReus => (b, a),
    }
}

/// `dE/dP_i` for one project at its bank-translated values.
pub fn grad_effort_wrt_value(project: &SeerProject, table: &ValueTable, id: ParameterId) -> Result<f64> {
    let row = id
        .row()
        .ok_or_else(|| Error::domain("gradient", format!("{id} is not a rated parameter")))?;
    let values = bank_translate(project, table)?;
    let (_, partials) = effort_partials(project.size, &values)?;
    Ok(partials[row])
}

fn check_actual(project: &SeerProject) -> Result<f64> {
    let actual = project.actual_effort;
    if actual > 0.0 && actual.is_finite() {
        Ok(actual)
    } else {
        Err(Error::domain(
            "loss",
            format!("project {} has non-positive actual effort {actual}", project.id),
        ))
    }
}

/// `0.5 * sum_n w_n ((E_n - A_n) / A_n)^2`.
pub fn loss(projects: &[SeerProject], table: &ValueTable) -> Result<f64> {
    let mut total = 0.0;
    for project in projects {
        let actual = check_actual(project)?;
        let values = bank_translate(project, table)?;
        let estimate = engine::estimate(project.size, &values)?.effort;
        let rel = (estimate - actual) / actual;
        total += 0.5 * project.weight * rel * rel;
    }
    Ok(total)
}

/// Loss together with its gradient for every consequent.
pub fn loss_and_gradient(projects: &[SeerProject], table: &ValueTable) -> Result<(f64, TableGradient)> {
    let mut total = 0.0;
    let mut gradient = [[0.0; LEVELS]; RATED];
    for project in projects {
        let actual = check_actual(project)?;
        let values = bank_translate(project, table)?;
        let (breakdown, partials) = effort_partials(project.size, &values)?;
        let residual = breakdown.effort - actual;
        let rel = residual / actual;
        total += 0.5 * project.weight * rel * rel;
        let scale = project.weight * residual / (actual * actual);
        for (row, (&x, &partial)) in project.ratings.iter().zip(partials.iter()).enumerate() {
            let weights = rule_weights(x)?;
            for (g, w) in gradient[row].iter_mut().zip(weights.iter()) {
                if *w != 0.0 {
                    *g += scale * partial * w;
                }
            }
        }
    }
    Ok((total, gradient))
}

/// `dLoss/dP_ir` for one consequent (`level` is 1-based).
pub fn grad_loss_wrt_consequent(
    projects: &[SeerProject],
    table: &ValueTable,
    id: ParameterId,
    level: usize,
) -> Result<f64> {
    let row = id
        .row()
        .ok_or_else(|| Error::domain("gradient", format!("{id} is not a rated parameter")))?;
    if !(1..=LEVELS).contains(&level) {
        return Err(Error::LevelRange(level));
    }
    let mut total = 0.0;
    for project in projects {
        let actual = check_actual(project)?;
        let membership = rule_weights(project.ratings[row])?[level - 1];
        if membership == 0.0 {
            continue;
        }
        let values = bank_translate(project, table)?;
        let (breakdown, partials) = effort_partials(project.size, &values)?;
        total += project.weight / (actual * actual)
            * (breakdown.effort - actual)
            * partials[row]
            * membership;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ParameterId::*;

    fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    fn sample_project() -> SeerProject {
        let mut p = SeerProject::nominal("p", 40_000.0, 20.0);
        p.sibr = 0.3;
        for (i, &id) in ParameterId::rated().iter().enumerate() {
            p.set_rating(id, 1.0 + (i as f64 * 0.37) % 17.0).unwrap();
        }
        p
    }

    #[test]
    fn effort_partials_match_finite_differences() {
        let table = ValueTable::synthetic();
        let project = sample_project();
        let values = bank_translate(&project, &table).unwrap();
        let (_, partials) = effort_partials(project.size, &values).unwrap();
        for &id in ParameterId::rated() {
            let p0 = values.get(id).unwrap();
            let fd = central_difference(
                |p| engine::estimate(project.size, &values.with(id, p)).unwrap().effort,
                p0,
                1e-6,
            );
            let analytic = partials[id.row().unwrap()];
            assert!(
                (analytic - fd).abs() <= 1e-5 * analytic.abs().max(1e-3),
                "{id}: analytic {analytic} vs fd {fd}"
            );
        }
    }

    #[test]
    fn plain_factor_and_staffing_derivatives() {
        let table = ValueTable::synthetic();
        let mut project = sample_project();
        project.set_rating(Test, 8.0).unwrap();
        project.set_rating(D, 8.0).unwrap();
        let values = bank_translate(&project, &table).unwrap();
        let (b, partials) = effort_partials(project.size, &values).unwrap();
        assert_relative_eq!(partials[Test.row().unwrap()], 1.2 * b.effort / 1.0, max_relative = 1e-14);
        assert_relative_eq!(partials[D.row().unwrap()], 0.4 * b.effort / 10.0, max_relative = 1e-14);
    }

    #[test]
    fn reus_is_inert_without_reuse() {
        let table = ValueTable::synthetic();
        let mut project = sample_project();
        project.sibr = 0.0;
        assert_eq!(grad_effort_wrt_value(&project, &table, Reus).unwrap(), 0.0);
    }

    #[test]
    fn loss_examples() {
        let table = ValueTable::synthetic();
        let mut p = SeerProject::nominal("p", 30_000.0, 1.0);
        let estimate = engine::estimate(p.size, &bank_translate(&p, &table).unwrap()).unwrap().effort;
        p.actual_effort = estimate;
        assert_eq!(loss(&[p.clone()], &table).unwrap(), 0.0);
        p.actual_effort = estimate / 2.0;
        assert_relative_eq!(loss(&[p.clone()], &table).unwrap(), 0.5, max_relative = 1e-12);
        p.actual_effort = 0.0;
        assert!(loss(&[p], &table).is_err());
    }

    #[test]
    fn consequent_gradient_vanishes_without_membership() {
        let table = ValueTable::synthetic();
        let project = SeerProject::nominal("p", 30_000.0, 3.0);
        // Every rating sits on level 8, so no project touches level 3.
        assert_eq!(grad_loss_wrt_consequent(std::slice::from_ref(&project), &table, Acap, 3).unwrap(), 0.0);
        assert_ne!(grad_loss_wrt_consequent(&[project], &table, Acap, 8).unwrap(), 0.0);
    }

    #[test]
    fn consequent_gradient_matches_bulk_gradient() {
        let table = ValueTable::synthetic();
        let projects = vec![sample_project(), SeerProject::nominal("q", 10_000.0, 4.0)];
        let (_, bulk) = loss_and_gradient(&projects, &table).unwrap();
        for &id in ParameterId::rated() {
            for level in 1..=LEVELS {
                let single = grad_loss_wrt_consequent(&projects, &table, id, level).unwrap();
                assert_relative_eq!(single, bulk[id.row().unwrap()][level - 1], max_relative = 1e-12);
            }
        }
    }
}
