//! Transition densities of Lévy random bridges.
//!
//! For a Lévy process with marginal densities `rho_t` and terminal law `nu`,
//! the bridge moves from `(s, x)` to `(t, y)` with density
//! `psi_t(y) / psi_s(x) * rho_{t-s}(y - x)`, where
//! `psi_t(y) = ∫ rho_{U-t}(z - y) / rho_U(z) nu(dz)`.

use std::fmt;
use std::sync::Arc;

use super::information::check_time;
use super::prior::PriorLaw;
use crate::error::{domain, Result};
use crate::numerics::{self, gaussian_expectation, QuadratureConfig};

/// Marginal densities of the driving Lévy process.
pub trait LevyDensity: Send + Sync {
    fn log_density(&self, t: f64, x: f64) -> f64;

    fn density(&self, t: f64, x: f64) -> f64 {
        self.log_density(t, x).exp()
    }

    /// `Some(v)` when `rho_t` is the centred normal law with variance `v`.
    fn gaussian_variance(&self, _t: f64) -> Option<f64> {
        None
    }
}

/// Standard Brownian motion: `rho_t = N(0, t)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BrownianDensity;

impl LevyDensity for BrownianDensity {
    fn log_density(&self, t: f64, x: f64) -> f64 {
        numerics::normal::log_density(x, 0.0, t)
    }

    fn gaussian_variance(&self, t: f64) -> Option<f64> {
        Some(t)
    }
}

/// Quadrature settings for the `psi` integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiQuadrature {
    /// Node-escalation tolerance for Gauss–Hermite (Gaussian `nu`).
    pub gh_rel_tol: f64,
    /// Adaptive settings for bounded `nu`.
    pub adaptive: QuadratureConfig,
}

impl Default for PsiQuadrature {
    fn default() -> Self {
        Self { gh_rel_tol: 1e-12, adaptive: QuadratureConfig::tight() }
    }
}

#[derive(Clone)]
pub struct LrbDensitySpec {
    pub rho: Arc<dyn LevyDensity>,
    pub psi: PsiQuadrature,
}

impl fmt::Debug for LrbDensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LrbDensitySpec").field("psi", &self.psi).finish_non_exhaustive()
    }
}

impl LrbDensitySpec {
    pub fn brownian() -> Self {
        Self { rho: Arc::new(BrownianDensity), psi: PsiQuadrature::default() }
    }

    /// `psi_t(y)` against the terminal law `nu` over horizon `U`.
    pub fn psi(&self, nu: &PriorLaw, horizon: f64, t: f64, y: f64) -> Result<f64> {
        let log_ratio =
            |z: f64| self.rho.log_density(horizon - t, z - y) - self.rho.log_density(horizon, z);
        match nu {
            PriorLaw::Discrete { atoms } => Ok(atoms
                .iter()
                .filter(|(_, w)| *w > 0.0)
                .map(|&(z, w)| w * log_ratio(z).exp())
                .sum()),
            PriorLaw::Gaussian { mean, variance } => {
                if let (Some(va), Some(vb)) =
                    (self.rho.gaussian_variance(horizon - t), self.rho.gaussian_variance(horizon))
                {
                    return Ok(gaussian_psi(*mean, *variance, va, vb, y));
                }
                gaussian_expectation(*mean, *variance, self.psi.gh_rel_tol, |z| log_ratio(z).exp())
            }
            PriorLaw::Uniform { lo, hi } => {
                let mass = numerics::integrate(|z| Ok(log_ratio(z).exp()), *lo, *hi, &self.psi.adaptive)?;
                Ok(mass / (hi - lo))
            }
        }
    }

    /// Density of `L_t = y` given `L_s = x`, for `0 <= s < t < U`.
    pub fn transition_density(
        &self,
        nu: &PriorLaw,
        horizon: f64,
        s: f64,
        t: f64,
        x: f64,
        y: f64,
    ) -> Result<f64> {
        check_time(horizon, t)?;
        if !(s >= 0.0 && s < t) {
            return Err(domain(format!("need 0 <= s < t, got s={s}, t={t}")));
        }
        let num = self.psi(nu, horizon, t, y)?;
        let den = self.psi(nu, horizon, s, x)?;
        Ok(num / den * self.rho.density(t - s, y - x))
    }
}

/// `E[N(z - y; 0, va) / N(z; 0, vb)]` for `z ~ N(m, v)`, with `va < vb`.
fn gaussian_psi(m: f64, v: f64, va: f64, vb: f64, y: f64) -> f64 {
    // exponent -(z - m)^2 / 2v - (z - y)^2 / 2va + z^2 / 2vb, completed in z
    let p = 1.0 / v + 1.0 / va - 1.0 / vb;
    let q = m / v + y / va;
    let r = m * m / v + y * y / va;
    let log = 0.5 * (vb / (va * v * p)).ln() + 0.5 * (q * q / p - r);
    log.exp()
}

/// Free-function form of [`LrbDensitySpec::transition_density`].
pub fn lrb_transition_density(
    spec: &LrbDensitySpec,
    prior: &PriorLaw,
    horizon: f64,
    s: f64,
    t: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    spec.transition_density(prior, horizon, s, t, x, y)
}
