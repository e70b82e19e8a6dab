use serde::{Deserialize, Serialize};

use super::prior::PriorLaw;
use crate::error::{domain, invalid, Error, Result};

/// Relative width of the excluded band just below the horizon.
pub const HORIZON_GUARD: f64 = 1e-9;

/// Brownian bridge information process `L_t = sigma t X + beta_t` on `[0, U]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationModel {
    pub sigma: f64,
    #[serde(rename = "U")]
    pub horizon: f64,
    pub prior: PriorLaw,
}

/// A Gaussian law given by mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLaw {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianLaw {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn density(&self, y: f64) -> f64 {
        crate::numerics::normal::density(y, self.mean, self.variance)
    }
}

impl InformationModel {
    pub fn new(sigma: f64, horizon: f64, prior: PriorLaw) -> Result<Self> {
        let m = Self { sigma, horizon, prior };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(invalid(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(invalid(format!("U must be > 0, got {}", self.horizon)));
        }
        self.prior.validate()
    }

    /// Latest admissible time, `U (1 - 1e-9)`.
    pub fn last_time(&self) -> f64 {
        self.horizon * (1.0 - HORIZON_GUARD)
    }

    /// Rejects `t < 0` and `t` inside the guard band below the horizon.
    pub fn check_time(&self, t: f64) -> Result<()> {
        check_time(self.horizon, t)
    }

    /// Law of `L_{t+u}` given `L_t = x` under the bridge measure.
    pub fn bridge_conditional_law(&self, s: f64, t: f64, x: f64) -> Result<GaussianLaw> {
        bridge_conditional_law(self.horizon, s, t, x)
    }

    /// Exponent coefficients `(alpha, beta)` of the likelihood
    /// `exp(alpha x - beta x^2 / 2)` for `X = x` given `L_t = ell`.
    fn likelihood(&self, t: f64, ell: f64) -> (f64, f64) {
        if t == 0.0 {
            // L_0 = 0 carries no information whatever ell is passed
            return (0.0, 0.0);
        }
        let k = self.horizon / (self.horizon - t);
        (k * self.sigma * ell, k * self.sigma * self.sigma * t)
    }

    /// `log Φ_t(ell)`, the log density of P with respect to the bridge
    /// measure on the information available at t.
    pub fn log_likelihood_ratio(&self, t: f64, ell: f64) -> Result<f64> {
        self.check_time(t)?;
        let (a, b) = self.likelihood(t, ell);
        self.prior
            .tilt(a, b)
            .map(|tl| tl.log_partition)
            .map_err(|_| Error::NonNormalizablePosterior { t, ell })
    }

    /// `E_P[X_U | L_t = ell]`.
    pub fn posterior_mean(&self, t: f64, ell: f64) -> Result<f64> {
        self.check_time(t)?;
        let (a, b) = self.likelihood(t, ell);
        self.prior
            .tilt(a, b)
            .map(|tl| tl.mean)
            .map_err(|_| Error::NonNormalizablePosterior { t, ell })
    }

    /// The change-of-measure martingale `M_t = 1 / Φ_t(L_t)` from P to the
    /// bridge measure, with `dM/M = -(sigma U / (U - t)) E[X | L_t] dW`.
    pub fn measure_change_martingale(&self, t: f64, ell: f64) -> Result<f64> {
        Ok((-self.log_likelihood_ratio(t, ell)?).exp())
    }

    /// Drift coefficient `sigma U / (U - t) * E[X | L_t]` of the innovation.
    pub fn innovation_drift(&self, t: f64, ell: f64) -> Result<f64> {
        Ok(self.sigma * self.horizon / (self.horizon - t) * self.posterior_mean(t, ell)?)
    }

    /// Law of the terminal value `L_UU = sigma U X` (the Lévy random bridge
    /// marginal).
    pub fn terminal_law(&self) -> PriorLaw {
        self.prior.scaled(self.sigma * self.horizon)
    }
}

pub(crate) fn check_time(horizon: f64, t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(domain(format!("time {t} must be >= 0")));
    }
    if t > horizon * (1.0 - HORIZON_GUARD) {
        return Err(domain(format!("time {t} is not below the horizon U={horizon}")));
    }
    Ok(())
}

pub(crate) fn bridge_conditional_law(horizon: f64, s: f64, t: f64, x: f64) -> Result<GaussianLaw> {
    check_time(horizon, t)?;
    if !(s >= 0.0 && s <= t) {
        return Err(domain(format!("need 0 <= s <= t, got s={s}, t={t}")));
    }
    let ratio = (horizon - t) / (horizon - s);
    Ok(GaussianLaw { mean: x * ratio, variance: (t - s) * ratio })
}
