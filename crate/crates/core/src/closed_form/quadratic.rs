use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::kernel::{ClosedFormTag, KernelFunction, KernelModel, TerminalFunctionSpec, WeightFunctionSpec};
use crate::process::{check_time, InformationModel};

/// `(U - t)^3 / 12 + (U - t)^2 x^2 / 4`.
pub fn quadratic_heat_kernel(horizon: f64, t: f64, x: f64) -> f64 {
    let d = horizon - t;
    d * d * d / 12.0 + 0.25 * d * d * x * x
}

/// Pricing kernel with `F(x) = x^2` and `w(t, u) = U - t - u` under the
/// bridge measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticModel {
    pub process: InformationModel,
}

impl QuadraticModel {
    pub fn new(process: InformationModel) -> Result<Self> {
        process.validate()?;
        Ok(Self { process })
    }

    pub fn horizon(&self) -> f64 {
        self.process.horizon
    }

    /// The same model expressed for the generic engine.
    pub fn kernel_model(&self) -> KernelModel {
        KernelModel {
            process: self.process.clone(),
            terminal: TerminalFunctionSpec::Quadratic,
            weight: WeightFunctionSpec::Affine,
            closed_form: Some(ClosedFormTag::Quadratic),
            measure: Default::default(),
            quadrature: Default::default(),
        }
    }

    pub fn f(&self, t: f64, x: f64) -> Result<f64> {
        self.process.check_time(t)?;
        Ok(quadratic_heat_kernel(self.horizon(), t, x))
    }

    /// `∂f/∂x = (U - t)^2 x / 2`.
    pub fn f_x(&self, t: f64, x: f64) -> Result<f64> {
        self.process.check_time(t)?;
        let d = self.horizon() - t;
        Ok(0.5 * d * d * x)
    }

    /// `E_B[L_{t+u}^2 | L_t = x] = u (U-t-u)/(U-t) + ((U-t-u)/(U-t))^2 x^2`.
    pub fn conditional_second_moment(&self, u: f64, t: f64, x: f64) -> Result<f64> {
        self.process.check_time(t)?;
        if !(u >= 0.0) {
            return Err(domain(format!("u must be >= 0, got {u}")));
        }
        check_time(self.horizon(), t + u)?;
        let d = self.horizon() - t;
        let a = (d - u) / d;
        Ok(u * a + a * a * x * x)
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
        let (d, r) = (self.horizon() - t, self.horizon() - maturity);
        let r3 = r * r * r;
        let num = r3 / 12.0 + 0.25 * (maturity - t) * r3 / d + 0.25 * r3 * r / (d * d) * x * x;
        Ok(num / quadratic_heat_kernel(self.horizon(), t, x))
    }

    /// `x^2 / ((U-t)/4 ((U-t)/3 + x^2))`; zero exactly at `x = 0`.
    pub fn short_rate(&self, t: f64, x: f64) -> Result<f64> {
        self.process.check_time(t)?;
        let d = self.horizon() - t;
        Ok(x * x / (0.25 * d * (d / 3.0 + x * x)))
    }

    pub fn market_price_of_risk(&self, t: f64, x: f64) -> Result<f64> {
        let post = self.process.posterior_mean(t, x)?;
        let d = self.horizon() - t;
        Ok(self.process.sigma * self.horizon() / d * post - self.f_x(t, x)? / self.f(t, x)?)
    }
}

impl KernelFunction for QuadraticModel {
    fn horizon(&self) -> f64 {
        self.process.horizon
    }

    fn value(&self, t: f64, x: f64) -> Result<f64> {
        self.f(t, x)
    }
}
