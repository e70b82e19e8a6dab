use serde::Serialize;

use super::coeffs::{quad_option_coeffs, OptionSpec, QuadCoeffs};
use super::integral::positive_part_integral;
use crate::closed_form::QuadraticModel;
use crate::error::Result;

/// Which branch of the case analysis priced the option.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptionCase {
    /// `c = 0, b = 0`: the payoff is `max(a, 0)` almost surely.
    C0BZero,
    C0BPos,
    C0BNeg,
    CNegDiscPos,
    CPosDiscPos,
    /// Always out of the money.
    CNegDiscNonpos,
    /// Always in the money.
    CPosDiscNonpos,
    /// `s = t`.
    Intrinsic,
}

impl OptionCase {
    pub fn label(&self) -> &'static str {
        match self {
            OptionCase::C0BZero => "c0_bzero",
            OptionCase::C0BPos => "c0_bpos",
            OptionCase::C0BNeg => "c0_bneg",
            OptionCase::CNegDiscPos => "cneg_disc_pos",
            OptionCase::CPosDiscPos => "cpos_disc_pos",
            OptionCase::CNegDiscNonpos => "cneg_disc_nonpos",
            OptionCase::CPosDiscNonpos => "cpos_disc_nonpos",
            OptionCase::Intrinsic => "intrinsic",
        }
    }

    pub fn classify(q: &QuadCoeffs) -> Self {
        if q.c == 0.0 {
            if q.b == 0.0 {
                OptionCase::C0BZero
            } else if q.b > 0.0 {
                OptionCase::C0BPos
            } else {
                OptionCase::C0BNeg
            }
        } else {
            match (q.c < 0.0, q.discriminant > 0.0) {
                (true, true) => OptionCase::CNegDiscPos,
                (false, true) => OptionCase::CPosDiscPos,
                (true, false) => OptionCase::CNegDiscNonpos,
                (false, false) => OptionCase::CPosDiscNonpos,
            }
        }
    }
}

impl std::fmt::Display for OptionCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptionQuote {
    pub price: f64,
    pub case: OptionCase,
    /// Absent for immediate exercise.
    pub coeffs: Option<QuadCoeffs>,
}

/// Closed-form call price under the quadratic model:
/// `C = I_pos / f(s, L_s)` with `I_pos = ∫ (c y^2 + b y + a)^+ φ(y) dy`.
pub fn quad_option_price(model: &QuadraticModel, spec: &OptionSpec) -> Result<OptionQuote> {
    spec.validate(model.horizon())?;
    if spec.is_immediate() {
        let p = model.bond_price(spec.t, spec.maturity, spec.l_s)?;
        return Ok(OptionQuote { price: (p - spec.strike).max(0.0), case: OptionCase::Intrinsic, coeffs: None });
    }
    let q = quad_option_coeffs(model, spec)?;
    let i_pos = positive_part_integral(q.a, q.b, q.c, q.roots).max(0.0);
    let price = i_pos / model.f(spec.s, spec.l_s)?;
    Ok(OptionQuote { price, case: OptionCase::classify(&q), coeffs: Some(q) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{InformationModel, PriorLaw};

    fn model() -> QuadraticModel {
        QuadraticModel::new(InformationModel::new(1.0, 10.0, PriorLaw::point_mass(0.0)).unwrap()).unwrap()
    }

    #[test]
    fn worked_example() {
        let m = model();
        let spec = OptionSpec::new(0.0, 2.0, 5.0, 0.2, 0.0);
        let q = quad_option_price(&m, &spec).unwrap();
        assert_eq!(q.case.label(), "cneg_disc_pos");
        assert!((q.price - 0.148_682).abs() < 1e-6, "{}", q.price);
        let lower = m.bond_price(0.0, 5.0, 0.0).unwrap() - 0.2 * m.bond_price(0.0, 2.0, 0.0).unwrap();
        assert!((lower - 0.14866).abs() < 1e-5);
        assert!(q.price >= lower);
    }

    #[test]
    fn deep_out_of_the_money_is_zero() {
        let q = quad_option_price(&model(), &OptionSpec::new(0.0, 2.0, 5.0, 0.95, 0.3)).unwrap();
        assert_eq!(q.case, OptionCase::CNegDiscNonpos);
        assert_eq!(q.price, 0.0);
    }

    #[test]
    fn zero_strike_is_the_bond() {
        let m = model();
        let q = quad_option_price(&m, &OptionSpec::new(1.0, 3.0, 6.0, 0.0, 0.4)).unwrap();
        assert_eq!(q.case, OptionCase::CPosDiscNonpos);
        let p = m.bond_price(1.0, 6.0, 0.4).unwrap();
        assert!((q.price - p).abs() < 1e-14);
    }

    #[test]
    fn b_zero_strike_collapses() {
        // B = 0 at K = ((U - T) / (U - t))^4
        let k = (5.0f64 / 8.0).powi(4);
        let q = quad_option_price(&model(), &OptionSpec::new(0.0, 2.0, 5.0, k, 0.0)).unwrap();
        let c = q.coeffs.unwrap();
        assert!(c.c.abs() < 1e-15 && c.b.abs() < 1e-15);
    }

    #[test]
    fn immediate_exercise() {
        let m = model();
        let q = quad_option_price(&m, &OptionSpec::new(2.0, 2.0, 5.0, 0.5, 1.0)).unwrap();
        assert_eq!(q.case, OptionCase::Intrinsic);
        let p = m.bond_price(2.0, 5.0, 1.0).unwrap();
        assert!((q.price - (p - 0.5).max(0.0)).abs() < 1e-15);
    }
}
