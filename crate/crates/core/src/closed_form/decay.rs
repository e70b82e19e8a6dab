use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

fn one() -> f64 {
    1.0
}

/// Positive nonincreasing functions of time with analytic derivatives.
///
/// Used for the `g0`, `g1` modifiers of the exponential-quadratic family and
/// for horizon weight profiles `w(t, u) = wbar(t + u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DecayFunction {
    /// `scale * exp(-rate * t)`.
    Exponential {
        #[serde(default = "one")]
        scale: f64,
        rate: f64,
    },
    /// `scale * (U - t)^alpha`.
    Power {
        #[serde(default = "one")]
        scale: f64,
        alpha: f64,
    },
    Constant { value: f64 },
}

impl DecayFunction {
    pub fn exponential(rate: f64) -> Self {
        DecayFunction::Exponential { scale: 1.0, rate }
    }

    pub fn value(&self, horizon: f64, t: f64) -> f64 {
        match *self {
            DecayFunction::Exponential { scale, rate } => scale * (-rate * t).exp(),
            DecayFunction::Power { scale, alpha } => scale * (horizon - t).max(0.0).powf(alpha),
            DecayFunction::Constant { value } => value,
        }
    }

    pub fn derivative(&self, horizon: f64, t: f64) -> f64 {
        match *self {
            DecayFunction::Exponential { scale, rate } => -rate * scale * (-rate * t).exp(),
            DecayFunction::Power { scale, alpha } => {
                -alpha * scale * (horizon - t).max(0.0).powf(alpha - 1.0)
            }
            DecayFunction::Constant { .. } => 0.0,
        }
    }

    /// Parameter checks plus a grid scan for positivity and monotonicity
    /// on `[0, U)`.
    pub fn validate(&self, horizon: f64) -> Result<()> {
        match *self {
            DecayFunction::Exponential { scale, rate } => {
                if !(scale > 0.0 && rate >= 0.0 && rate.is_finite()) {
                    return Err(invalid(format!("exponential decay needs scale > 0, rate >= 0 ({scale}, {rate})")));
                }
            }
            DecayFunction::Power { scale, alpha } => {
                if !(scale > 0.0 && alpha > 0.0 && alpha.is_finite()) {
                    return Err(invalid(format!("power decay needs scale > 0, alpha > 0 ({scale}, {alpha})")));
                }
            }
            DecayFunction::Constant { value } => {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(invalid(format!("constant must be > 0, got {value}")));
                }
            }
        }
        let n = 200;
        let mut prev = f64::INFINITY;
        for i in 0..n {
            let t = horizon * i as f64 / n as f64;
            let v = self.value(horizon, t);
            if !(v > 0.0) || v > prev {
                return Err(invalid(format!("decay function not positive nonincreasing at t={t}")));
            }
            prev = v;
        }
        Ok(())
    }
}
