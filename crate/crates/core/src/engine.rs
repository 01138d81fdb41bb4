//! SEER-SEM effort equations.
//!
//! Effort is evaluated stepwise: `ctbx` gives basic technology `C_tb`, the
//! adjustment product turns it into effective technology `C_te`, and
//! lifecycle effort `K = D^0.4 (S_e / C_te)^1.2` is scaled to development
//! effort `E = 0.393469 K` (person-years).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parameter::{ParamValues, ParameterId};

pub const DEVELOPMENT_FRACTION: f64 = 0.393469;
pub const TECHNOLOGY_BASE: f64 = 2000.0;
pub const CTBX_REFERENCE: f64 = 4.11;
pub const TECHNOLOGY_SLOPE: f64 = 3.70945;
pub const SIZE_EXPONENT: f64 = 1.2;
pub const STAFFING_EXPONENT: f64 = 0.4;

/// Single (non-combined) factors of `ctbx`, besides the AEXP/APPL pair.
pub const CTBX_SINGLES: [ParameterId; 5] = [
    ParameterId::Acap,
    ParameterId::Modp,
    ParameterId::Pcap,
    ParameterId::Tool,
    ParameterId::Term,
];

/// Single (non-combined) factors of the parameter adjustment, in formula order.
pub const ADJUSTMENT_SINGLES: [ParameterId; 16] = [
    ParameterId::Mult,
    ParameterId::Rded,
    ParameterId::Rloc,
    ParameterId::Dsvl,
    ParameterId::Psvl,
    ParameterId::Rvol,
    ParameterId::Spec,
    ParameterId::Test,
    ParameterId::Qual,
    ParameterId::Rhst,
    ParameterId::Disp,
    ParameterId::Memc,
    ParameterId::Timc,
    ParameterId::Rtim,
    ParameterId::Secr,
    ParameterId::Tsvl,
];

/// Combined parameters; each takes two raw values `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combined {
    /// `(AEXP, APPL)`
    AexpAppl,
    /// `(LANG, LEXP)`
    LangLexp,
    /// `(TSYS, TEXP)`
    TsysTexp,
    /// `(DSY, DEXP)`
    DsysDexp,
    /// `(PSYS, PEXP)`
    PsysPexp,
    /// `(SIBR, REUS)`
    SibrReus,
}

impl Combined {
    pub const ADJUSTMENT: [Combined; 5] = [
        Combined::LangLexp,
        Combined::TsysTexp,
        Combined::DsysDexp,
        Combined::PsysPexp,
        Combined::SibrReus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Combined::AexpAppl => "AEXPAPPL",
            Combined::LangLexp => "LANGLEXP",
            Combined::TsysTexp => "TSYSTEXP",
            Combined::DsysDexp => "DSYSDEXP",
            Combined::PsysPexp => "PSYSPEXP",
            Combined::SibrReus => "SIBRREUS",
        }
    }

    pub fn operands(self) -> (ParameterId, ParameterId) {
        use ParameterId::*;
        match self {
            Combined::AexpAppl => (Aexp, Appl),
            Combined::LangLexp => (Lang, Lexp),
            Combined::TsysTexp => (Tsys, Texp),
            Combined::DsysDexp => (Dsy, Dexp),
            Combined::PsysPexp => (Psys, Pexp),
            Combined::SibrReus => (Sibr, Reus),
        }
    }
}

pub fn compute_combined(kind: Combined, a: f64, b: f64) -> Result<f64> {
    let (first, second) = kind.operands();
    let fail = |detail: String| Err(Error::domain(kind.name(), detail));
    if !a.is_finite() {
        return fail(format!("{first} = {a} is not finite"));
    }
    if !b.is_finite() {
        return fail(format!("{second} = {b} is not finite"));
    }
    let nonzero = |id: ParameterId, v: f64| {
        if v == 0.0 {
            Err(Error::domain(kind.name(), format!("{id} must be non-zero")))
        } else {
            Ok(v)
        }
    };
    let value = match kind {
        Combined::AexpAppl => {
            let appl = nonzero(second, b)?;
            0.82 + 0.47 * (-0.95977 * (a / appl)).exp()
        }
        Combined::LangLexp => {
            let lang = nonzero(first, a)?;
            1.0 + ((1.11 + 0.085 * lang) - 1.0) * (-b / (lang / 3.0)).exp()
        }
        Combined::TsysTexp => {
            let tsy = nonzero(first, a)?;
            1.0 + (0.035 + 0.025 * tsy) * (-3.0 * b / tsy).exp()
        }
        Combined::DsysDexp => {
            let dsy = nonzero(first, a)?;
            1.0 + (0.06 + 0.05 * dsy) * (-3.0 * b / dsy).exp()
        }
        Combined::PsysPexp => {
            if a == 0.0 {
                1.0
            } else {
                let base = 0.91f64.powf(a) + 0.23 * a * (-3.0 * b / a).exp();
                if base <= 0.0 {
                    return fail(format!("base {base} of the 0.833 power is not positive"));
                }
                base.powf(0.833)
            }
        }
        Combined::SibrReus => {
            if !(0.0..=1.0).contains(&a) {
                return fail(format!("SIBR = {a} outside [0, 1]"));
            }
            a * b + 1.0
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        fail(format!("result is not finite for ({a}, {b})"))
    }
}

fn combined_from(kind: Combined, values: &ParamValues) -> Result<f64> {
    let (a, b) = kind.operands();
    compute_combined(kind, values.get(a)?, values.get(b)?)
}

/// `ACAP x AEXPAPPL x MODP x PCAP x TOOL x TERM`.
pub fn compute_ctbx(values: &ParamValues) -> Result<f64> {
    let singles = CTBX_SINGLES
        .iter()
        .map(|&id| values.get(id))
        .product::<Result<f64>>()?;
    Ok(singles * combined_from(Combined::AexpAppl, values)?)
}

/// Product of the five combined factors and sixteen single factors. `sibr`
/// overrides any SIBR entry in `values`.
pub fn compute_parm_adjustment(values: &ParamValues, sibr: f64) -> Result<f64> {
    let combined = Combined::ADJUSTMENT
        .iter()
        .map(|&kind| match kind {
            Combined::SibrReus => {
                compute_combined(kind, sibr, values.get(ParameterId::Reus)?)
            }
            _ => combined_from(kind, values),
        })
        .product::<Result<f64>>()?;
    let singles = ADJUSTMENT_SINGLES
        .iter()
        .map(|&id| values.get(id))
        .product::<Result<f64>>()?;
    Ok(combined * singles)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffortBreakdown {
    pub ctbx: f64,
    pub parm_adjustment: f64,
    /// Basic technology.
    pub c_tb: f64,
    /// Effective technology.
    pub c_te: f64,
    /// Total lifecycle effort, person-years.
    pub k_lifecycle: f64,
    /// Development effort, person-years.
    pub effort: f64,
}

pub fn basic_technology(ctbx: f64, turn: f64) -> f64 {
    TECHNOLOGY_BASE * (-TECHNOLOGY_SLOPE * (ctbx / CTBX_REFERENCE).ln() / (5.0 * turn)).exp()
}

pub fn compute_effort(size: f64, d: f64, values: &ParamValues, sibr: f64) -> Result<EffortBreakdown> {
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain("effort", format!("{name} = {v} must be positive")))
        }
    };
    positive("size", size)?;
    positive("D", d)?;
    let turn = positive("TURN", values.get(ParameterId::Turn)?)?;
    let ctbx = positive("ctbx", compute_ctbx(values)?)?;
    let parm_adjustment = positive("ParmAdjustment", compute_parm_adjustment(values, sibr)?)?;

    let c_tb = basic_technology(ctbx, turn);
    let c_te = c_tb / parm_adjustment;
    let k_lifecycle = d.powf(STAFFING_EXPONENT) * (size / c_te).powf(SIZE_EXPONENT);
    let effort = DEVELOPMENT_FRACTION * k_lifecycle;
    if !(effort.is_finite() && effort > 0.0) {
        return Err(Error::domain("effort", format!("effort {effort} is not finite and positive")));
    }
    Ok(EffortBreakdown {
        ctbx,
        parm_adjustment,
        c_tb,
        c_te,
        k_lifecycle,
        effort,
    })
}

/// Effort with D and SIBR taken from `values` (SIBR defaults to 0).
pub fn estimate(size: f64, values: &ParamValues) -> Result<EffortBreakdown> {
    let d = values.get(ParameterId::D)?;
    let sibr = values.try_get(ParameterId::Sibr).unwrap_or(0.0);
    compute_effort(size, d, values, sibr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ParameterId::*;

    /// Values where every single factor is 1 and AEXPAPPL is exactly 0.82.
    fn unit_values() -> ParamValues {
        let mut v: ParamValues = ParameterId::rated().iter().map(|&id| (id, 1.0)).collect();
        v.set(Aexp, 1000.0);
        v.set(D, 10.0);
        v
    }

    #[test]
    fn combined_examples() {
        assert_eq!(compute_combined(Combined::PsysPexp, 0.0, 3.7).unwrap(), 1.0);
        assert_eq!(compute_combined(Combined::SibrReus, 0.0, 2.0).unwrap(), 1.0);
        assert_relative_eq!(compute_combined(Combined::AexpAppl, 0.0, 1.0).unwrap(), 1.29, max_relative = 1e-15);
        let oracle = 1.0 + ((1.11 + 0.085 * 3.0) - 1.0) * 1.0;
        assert_relative_eq!(compute_combined(Combined::LangLexp, 3.0, 0.0).unwrap(), oracle, max_relative = 1e-15);
        assert_relative_eq!(oracle, 1.365, max_relative = 1e-12);
    }

    #[test]
    fn combined_division_by_zero_names_argument() {
        for (kind, a, b, name) in [
            (Combined::AexpAppl, 1.0, 0.0, "APPL"),
            (Combined::LangLexp, 0.0, 1.0, "LANG"),
            (Combined::TsysTexp, 0.0, 1.0, "TSYS"),
            (Combined::DsysDexp, 0.0, 1.0, "DSY"),
        ] {
            let msg = compute_combined(kind, a, b).unwrap_err().to_string();
            assert!(msg.contains(kind.name()) && msg.contains(name), "{msg}");
        }
        assert!(compute_combined(Combined::SibrReus, 1.5, 1.0).is_err());
    }

    #[test]
    fn ctbx_examples() {
        let mut v = unit_values();
        v.set(Aexp, 0.0);
        v.set(Acap, 1.1);
        v.set(Modp, 0.9);
        v.set(Pcap, 1.2);
        let oracle = 1.1 * 1.29 * 0.9 * 1.2;
        assert_relative_eq!(compute_ctbx(&v).unwrap(), oracle, max_relative = 1e-14);
        assert_relative_eq!(oracle, 1.53252, max_relative = 1e-12);

        // AEXPAPPL forced to 1 by solving 0.47 exp(-k a) = 0.18 for a.
        let mut w = unit_values();
        w.set(Aexp, -(0.18f64 / 0.47).ln() / 0.95977);
        assert_relative_eq!(compute_ctbx(&w).unwrap(), 1.0, max_relative = 1e-14);
        w.set(Acap, 2.0);
        assert_relative_eq!(compute_ctbx(&w).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn ctbx_missing_symbol() {
        let mut v = unit_values();
        v.remove(Tool);
        assert!(compute_ctbx(&v).unwrap_err().to_string().contains("TOOL"));
    }

    #[test]
    fn parm_adjustment_examples() {
        // Large experience values drive every exponential term to zero, and a
        // tiny PSYS makes 0.91^PSYS round to 1, so each combined factor is 1.
        let mut v = unit_values();
        for id in [Lexp, Texp, Dexp, Pexp] {
            v.set(id, 1000.0);
        }
        v.set(Psys, 1e-300);
        assert_eq!(compute_parm_adjustment(&v, 0.0).unwrap(), 1.0);
        v.set(Test, 1.3);
        assert_relative_eq!(compute_parm_adjustment(&v, 0.0).unwrap(), 1.3, max_relative = 1e-15);
        v.set(Test, 1.0);
        v.set(Reus, 2.0);
        assert_relative_eq!(compute_parm_adjustment(&v, 0.5).unwrap(), 2.0, max_relative = 1e-15);

        // With ordinary inputs the product is a direct multiplication.
        let mut u = unit_values();
        u.set(Reus, 2.0);
        let oracle = compute_combined(Combined::LangLexp, 1.0, 1.0).unwrap()
            * compute_combined(Combined::TsysTexp, 1.0, 1.0).unwrap()
            * compute_combined(Combined::DsysDexp, 1.0, 1.0).unwrap()
            * compute_combined(Combined::PsysPexp, 1.0, 1.0).unwrap()
            * 2.0;
        assert_relative_eq!(compute_parm_adjustment(&u, 0.5).unwrap(), oracle, max_relative = 1e-14);
    }

    #[test]
    fn effort_anchors() {
        let mut v = unit_values();
        v.set(Acap, CTBX_REFERENCE / 0.82);
        for turn in [0.5, 1.0, 3.0] {
            v.set(Turn, turn);
            let b = compute_effort(1000.0, 1.0, &v, 0.0).unwrap();
            assert_relative_eq!(b.ctbx, CTBX_REFERENCE, max_relative = 1e-15);
            assert_relative_eq!(b.c_tb, 2000.0, max_relative = 1e-14);
        }
        assert_eq!(basic_technology(CTBX_REFERENCE, 0.7), 2000.0);

        let b = compute_effort(2000.0, 1.0, &v, 0.0).unwrap();
        assert_relative_eq!(b.c_te, b.c_tb / b.parm_adjustment, max_relative = 1e-15);
        assert_relative_eq!(b.effort, DEVELOPMENT_FRACTION * b.k_lifecycle, max_relative = 1e-15);
    }

    #[test]
    fn effort_worked_example() {
        // C_te = 2000 with ParmAdjustment = 1 isolates K = D^0.4 (S / C_te)^1.2.
        let mut v = unit_values();
        v.set(Acap, CTBX_REFERENCE / 0.82);
        for id in [Lexp, Texp, Dexp, Pexp] {
            v.set(id, 1000.0);
        }
        v.set(Psys, 1e-300);
        let b = compute_effort(50_000.0, 10.0, &v, 0.0).unwrap();
        let k = 10f64.powf(0.4) * 25f64.powf(1.2);
        assert_relative_eq!(b.k_lifecycle, k, max_relative = 1e-12);
        assert_relative_eq!(b.effort, 0.393469 * k, max_relative = 1e-12);
        assert!((b.k_lifecycle - 119.55).abs() < 0.02);
        assert!((b.effort - 47.04).abs() < 0.01);
    }

    #[test]
    fn effort_rejects_non_positive_inputs() {
        let v = unit_values();
        assert!(compute_effort(0.0, 1.0, &v, 0.0).is_err());
        assert!(compute_effort(1.0, -1.0, &v, 0.0).is_err());
        let mut w = v;
        w.set(Turn, 0.0);
        assert!(compute_effort(1.0, 1.0, &w, 0.0).is_err());
        let mut w = v;
        w.set(Acap, -1.0);
        assert!(compute_effort(1.0, 1.0, &w, 0.0).is_err());
    }

    #[test]
    fn estimate_reads_d_and_sibr() {
        let v = unit_values().with(Sibr, 0.25).with(Reus, 2.0);
        let direct = compute_effort(10_000.0, 10.0, &v, 0.25).unwrap();
        assert_eq!(estimate(10_000.0, &v).unwrap(), direct);
    }
}
