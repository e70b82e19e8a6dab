use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Terminal functions `F(tau, x)`, evaluated at absolute time `tau = t + u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TerminalFunctionSpec {
    /// `x^2`.
    Quadratic,
    /// `exp(gamma x^2 / 2)` with `gamma = 1 / (U - tau)`.
    ExponentialQuadratic,
    /// `exp(-mu x)`.
    ExponentialLinear { mu: f64 },
}

/// Split `F(tau, y) = exp(gamma y^2 / 2 + beta y) * G(y)` with `G` a
/// polynomial integrated exactly by `residual_nodes` Gauss–Hermite nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFactor {
    pub gamma: f64,
    pub beta: f64,
    pub residual_nodes: usize,
}

impl TerminalFunctionSpec {
    pub fn eval(&self, horizon: f64, tau: f64, x: f64) -> f64 {
        match self {
            TerminalFunctionSpec::Quadratic => x * x,
            TerminalFunctionSpec::ExponentialQuadratic => (0.5 * x * x / (horizon - tau)).exp(),
            TerminalFunctionSpec::ExponentialLinear { mu } => (-mu * x).exp(),
        }
    }

    pub fn factor(&self, horizon: f64, tau: f64) -> GaussianFactor {
        match self {
            TerminalFunctionSpec::Quadratic => GaussianFactor { gamma: 0.0, beta: 0.0, residual_nodes: 2 },
            TerminalFunctionSpec::ExponentialQuadratic => {
                GaussianFactor { gamma: 1.0 / (horizon - tau), beta: 0.0, residual_nodes: 1 }
            }
            TerminalFunctionSpec::ExponentialLinear { mu } => {
                GaussianFactor { gamma: 0.0, beta: -mu, residual_nodes: 1 }
            }
        }
    }

    /// `G(y)` from [`Self::factor`].
    pub fn residual(&self, y: f64) -> f64 {
        match self {
            TerminalFunctionSpec::Quadratic => y * y,
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TerminalFunctionSpec::ExponentialLinear { mu } if !mu.is_finite() => {
                Err(invalid(format!("mu must be finite, got {mu}")))
            }
            _ => Ok(()),
        }
    }
}
