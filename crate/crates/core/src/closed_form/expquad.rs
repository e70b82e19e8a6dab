use serde::{Deserialize, Serialize};

use super::decay::DecayFunction;
use crate::error::{domain, invalid, Error, Result};
use crate::kernel::{ClosedFormTag, KernelFunction, KernelModel, TerminalFunctionSpec, WeightFunctionSpec};
use crate::process::InformationModel;

/// Largest exponent `x^2 / (2 (U - t))` accepted before a range error.
pub const EXPONENT_CAP: f64 = 700.0;

fn gauss_exponent(horizon: f64, t: f64, x: f64) -> Result<f64> {
    let e = 0.5 * x * x / (horizon - t);
    if e > EXPONENT_CAP {
        return Err(Error::Range { exponent: e, cap: EXPONENT_CAP });
    }
    Ok(e)
}

/// `h(t, x) = (U - t)^(1/2) exp(x^2 / (2 (U - t)))`, a bridge-measure
/// martingale.
pub fn expquad_martingale(horizon: f64, t: f64, x: f64) -> Result<f64> {
    Ok((horizon - t).sqrt() * gauss_exponent(horizon, t, x)?.exp())
}

/// Weighted heat kernel of `F = exp(x^2 / (2 (U - t - u)))` against
/// `w = (U - t - u)^(eta - 1/2)`:
/// `(U - t)^(eta + 1/2) exp(x^2 / (2 (U - t))) / eta`.
pub fn expquad_heat_kernel(horizon: f64, eta: f64, t: f64, x: f64) -> Result<f64> {
    Ok((horizon - t).powf(eta + 0.5) * gauss_exponent(horizon, t, x)?.exp() / eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum G1Marker {
    Special,
}

/// The `g1` modifier: either the special choice `(U - t)^-(eta - 1/2)` or
/// a supplied decay function. JSON: `"special"` or a decay-function object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum G1Spec {
    Special(G1Marker),
    Function(DecayFunction),
}

impl G1Spec {
    pub fn special() -> Self {
        G1Spec::Special(G1Marker::Special)
    }

    pub fn is_special(&self) -> bool {
        matches!(self, G1Spec::Special(_))
    }
}

/// `f~(t, x) = g0(t) + g1(t) (U - t)^eta exp(x^2 / (2 (U - t)))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpQuadraticModel {
    pub process: InformationModel,
    pub eta: f64,
    pub g0: DecayFunction,
    pub g1: G1Spec,
}

impl ExpQuadraticModel {
    pub fn new(process: InformationModel, eta: f64, g0: DecayFunction, g1: G1Spec) -> Result<Self> {
        let m = Self { process, eta, g0, g1 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.process.validate()?;
        if !(self.eta.is_finite() && self.eta > 0.5) {
            return Err(invalid(format!("eta must be > 1/2, got {}", self.eta)));
        }
        self.g0.validate(self.horizon())?;
        if let G1Spec::Function(g1) = &self.g1 {
            g1.validate(self.horizon())?;
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.process.horizon
    }

    /// The unmodified `(F, w)` pair of this family for the generic engine.
    pub fn kernel_model(&self) -> KernelModel {
        KernelModel {
            process: self.process.clone(),
            terminal: TerminalFunctionSpec::ExponentialQuadratic,
            weight: WeightFunctionSpec::Power { eta: self.eta },
            closed_form: Some(ClosedFormTag::ExponentialQuadratic),
            measure: Default::default(),
            quadrature: Default::default(),
        }
    }

    pub fn g0(&self, t: f64) -> f64 {
        self.g0.value(self.horizon(), t)
    }

    pub fn g1(&self, t: f64) -> f64 {
        match &self.g1 {
            G1Spec::Special(_) => (self.horizon() - t).powf(-(self.eta - 0.5)),
            G1Spec::Function(g) => g.value(self.horizon(), t),
        }
    }

    pub fn g1_derivative(&self, t: f64) -> f64 {
        match &self.g1 {
            G1Spec::Special(_) => {
                let p = self.eta - 0.5;
                p * (self.horizon() - t).powf(-p - 1.0)
            }
            G1Spec::Function(g) => g.derivative(self.horizon(), t),
        }
    }

    /// `g1(t) (U - t)^eta exp(x^2 / (2 (U - t)))`.
    fn stochastic_part(&self, t: f64, x: f64) -> Result<f64> {
        let d = self.horizon() - t;
        Ok(self.g1(t) * d.powf(self.eta) * gauss_exponent(self.horizon(), t, x)?.exp())
    }

    pub fn f_tilde(&self, t: f64, x: f64) -> Result<f64> {
        self.process.check_time(t)?;
        Ok(self.g0(t) + self.stochastic_part(t, x)?)
    }

    pub fn bond_price(&self, t: f64, maturity: f64, x: f64) -> Result<f64> {
        self.process.check_time(t)?;
        self.process.check_time(maturity)?;
        if maturity < t {
            return Err(domain(format!("maturity {maturity} precedes valuation time {t}")));
        }
        if maturity == t {
            return Ok(1.0);
        }
        let u = self.horizon();
        let num = self.g0(maturity)
            + self.g1(maturity) * (u - maturity).powf(self.eta - 0.5) * expquad_martingale(u, t, x)?;
        Ok(num / self.f_tilde(t, x)?)
    }

    pub fn short_rate(&self, t: f64, x: f64) -> Result<f64> {
        self.process.check_time(t)?;
        let d = self.horizon() - t;
        let g0_dot = self.g0.derivative(self.horizon(), t);
        if self.g1.is_special() {
            return Ok(-g0_dot / (self.g0(t) + expquad_martingale(self.horizon(), t, x)?));
        }
        let s = self.stochastic_part(t, x)?;
        let g1 = self.g1(t);
        let bracket = (self.eta - 0.5) / d - self.g1_derivative(t) / g1 - g0_dot / s;
        Ok(s / (self.g0(t) + s) * bracket)
    }

    pub fn market_price_of_risk(&self, t: f64, x: f64) -> Result<f64> {
        let post = self.process.posterior_mean(t, x)?;
        let d = self.horizon() - t;
        let f_x = self.stochastic_part(t, x)? * x / d;
        Ok(self.process.sigma * self.horizon() / d * post - f_x / self.f_tilde(t, x)?)
    }
}

impl KernelFunction for ExpQuadraticModel {
    fn horizon(&self) -> f64 {
        self.process.horizon
    }

    fn value(&self, t: f64, x: f64) -> Result<f64> {
        self.f_tilde(t, x)
    }
}
