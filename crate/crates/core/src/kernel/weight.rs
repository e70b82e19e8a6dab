//! Weight functions `w(t, u)` and the grid check of the weight inequality
//! `w(t, u - s) <= w(t - s, u)`.

use serde::{Deserialize, Serialize};

use crate::closed_form::DecayFunction;
use crate::error::{invalid, Result};

/// Tolerance for the weight inequality and leaf nonnegativity.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WeightFunctionSpec {
    /// `U - t - u`.
    Affine,
    /// `(U - t - u)^(eta - 1/2)`, `eta > 1/2`.
    Power { eta: f64 },
    /// `wbar(t + u)` for a nonincreasing `wbar`.
    HorizonFunction { wbar: DecayFunction },
    /// `c + a_t t + a_u u`. A weight exactly when `a_t <= a_u` and the
    /// function stays nonnegative; `w = t` is the stock counterexample.
    Linear { c: f64, a_t: f64, a_u: f64 },
    Scaled { c: f64, inner: Box<WeightFunctionSpec> },
    Sum { left: Box<WeightFunctionSpec>, right: Box<WeightFunctionSpec> },
    Product { left: Box<WeightFunctionSpec>, right: Box<WeightFunctionSpec> },
}

impl WeightFunctionSpec {
    pub fn scaled(c: f64, inner: WeightFunctionSpec) -> Self {
        WeightFunctionSpec::Scaled { c, inner: Box::new(inner) }
    }

    pub fn sum(left: WeightFunctionSpec, right: WeightFunctionSpec) -> Self {
        WeightFunctionSpec::Sum { left: Box::new(left), right: Box::new(right) }
    }

    pub fn product(left: WeightFunctionSpec, right: WeightFunctionSpec) -> Self {
        WeightFunctionSpec::Product { left: Box::new(left), right: Box::new(right) }
    }

    pub fn eval(&self, horizon: f64, t: f64, u: f64) -> f64 {
        match self {
            WeightFunctionSpec::Affine => horizon - t - u,
            WeightFunctionSpec::Power { eta } => (horizon - t - u).max(0.0).powf(eta - 0.5),
            WeightFunctionSpec::HorizonFunction { wbar } => wbar.value(horizon, t + u),
            WeightFunctionSpec::Linear { c, a_t, a_u } => c + a_t * t + a_u * u,
            WeightFunctionSpec::Scaled { c, inner } => c * inner.eval(horizon, t, u),
            WeightFunctionSpec::Sum { left, right } => {
                left.eval(horizon, t, u) + right.eval(horizon, t, u)
            }
            WeightFunctionSpec::Product { left, right } => {
                left.eval(horizon, t, u) * right.eval(horizon, t, u)
            }
        }
    }

    /// Parameter-level checks. The weight inequality itself is checked by
    /// [`check_weight_validity`].
    pub fn validate(&self, horizon: f64) -> Result<()> {
        match self {
            WeightFunctionSpec::Affine => Ok(()),
            WeightFunctionSpec::Power { eta } => {
                if eta.is_finite() && *eta > 0.5 {
                    Ok(())
                } else {
                    Err(invalid(format!("power weight needs eta > 1/2, got {eta}")))
                }
            }
            WeightFunctionSpec::HorizonFunction { wbar } => wbar.validate(horizon),
            WeightFunctionSpec::Linear { c, a_t, a_u } => {
                if [c, a_t, a_u].iter().all(|v| v.is_finite()) {
                    Ok(())
                } else {
                    Err(invalid("linear weight coefficients must be finite"))
                }
            }
            WeightFunctionSpec::Scaled { c, inner } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(invalid(format!("scale must be > 0, got {c}")));
                }
                inner.validate(horizon)
            }
            WeightFunctionSpec::Sum { left, right } | WeightFunctionSpec::Product { left, right } => {
                left.validate(horizon)?;
                right.validate(horizon)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightValidityReport {
    pub valid: bool,
    pub max_violation: f64,
    /// `(s, t, u)` at the largest violation, if any was positive.
    pub witness: Option<(f64, f64, f64)>,
}

/// Scans a uniform grid of spacing `U / (grid_density - 1)` over
/// `{0 <= s <= min(t, u), t + u <= U}` for violations of the weight
/// inequality and of nonnegativity.
pub fn check_weight_validity(
    w: &WeightFunctionSpec,
    horizon: f64,
    grid_density: usize,
) -> Result<WeightValidityReport> {
    if grid_density < 2 {
        return Err(invalid("grid_density must be >= 2"));
    }
    let n = grid_density - 1;
    let h = horizon / n as f64;
    let mut worst = 0.0f64;
    let mut witness = None;
    let mut record = |v: f64, at: (f64, f64, f64)| {
        if v > worst {
            worst = v;
            witness = Some(at);
        }
    };
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (t, u) = (i as f64 * h, j as f64 * h);
            record(-w.eval(horizon, t, u), (0.0, t, u));
            for k in 0..=i.min(j) {
                let s = k as f64 * h;
                let gap = w.eval(horizon, t, u - s) - w.eval(horizon, t - s, u);
                record(gap, (s, t, u));
            }
        }
    }
    Ok(WeightValidityReport { valid: worst <= WEIGHT_TOL, max_violation: worst, witness })
}
