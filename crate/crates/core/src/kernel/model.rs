use serde::{Deserialize, Serialize};

use super::terminal::TerminalFunctionSpec;
use super::weight::WeightFunctionSpec;
use crate::closed_form;
use crate::error::{domain, invalid, Error, Result};
use crate::numerics::{self, GaussHermiteRule, QuadratureConfig};
use crate::process::{bridge_conditional_law, check_time, GaussianLaw, InformationModel, LrbDensitySpec, PriorLaw};

/// Which closed form a `(F, w)` pair is known to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormTag {
    /// `F = x^2`, `w = U - t - u`.
    Quadratic,
    /// `F = exp(x^2 / (2 (U - t - u)))`, `w = (U - t - u)^(eta - 1/2)`.
    ExponentialQuadratic,
}

/// Measure under which conditional expectations are taken.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMeasure {
    /// Bridge measure: `L` is a standard Brownian bridge, the kernel is
    /// `pi_t = M_t f(t, L_t)`.
    #[default]
    Bridge,
    /// Real-world measure through the Brownian Lévy random bridge with
    /// terminal law `sigma U X`; the kernel is `pi_t = f(t, L_t)`.
    Lrb,
}

/// A process, terminal function and weight function: the ingredients of a
/// weighted heat kernel `f(t, x) = ∫_0^{U-t} p(u, t, x) w(t, u) du`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelModel {
    pub process: InformationModel,
    pub terminal: TerminalFunctionSpec,
    pub weight: WeightFunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormTag>,
    #[serde(default)]
    pub measure: KernelMeasure,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
}

/// Something that evaluates a candidate pricing-kernel function `f(t, x)`.
pub trait KernelFunction: Sync {
    fn horizon(&self) -> f64;
    fn value(&self, t: f64, x: f64) -> Result<f64>;
}

impl KernelModel {
    pub fn new(
        process: InformationModel,
        terminal: TerminalFunctionSpec,
        weight: WeightFunctionSpec,
        closed_form: Option<ClosedFormTag>,
    ) -> Result<Self> {
        let m = Self {
            process,
            terminal,
            weight,
            closed_form,
            measure: KernelMeasure::Bridge,
            quadrature: QuadratureConfig::default(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_measure(mut self, measure: KernelMeasure) -> Self {
        self.measure = measure;
        self
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureConfig) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.process.validate()?;
        self.terminal.validate()?;
        self.weight.validate(self.horizon())?;
        match (self.closed_form, &self.terminal, &self.weight) {
            (None, _, _)
            | (Some(ClosedFormTag::Quadratic), TerminalFunctionSpec::Quadratic, WeightFunctionSpec::Affine)
            | (
                Some(ClosedFormTag::ExponentialQuadratic),
                TerminalFunctionSpec::ExponentialQuadratic,
                WeightFunctionSpec::Power { .. },
            ) => {}
            (Some(tag), _, _) => {
                return Err(invalid(format!("closed-form tag {tag:?} does not match (F, w)")));
            }
        }
        if self.closed_form.is_some() && self.measure != KernelMeasure::Bridge {
            return Err(invalid("closed forms are stated under the bridge measure"));
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.process.horizon
    }

    fn lrb_spec(&self) -> (LrbDensitySpec, PriorLaw) {
        match self.measure {
            KernelMeasure::Bridge => (LrbDensitySpec::brownian(), PriorLaw::point_mass(0.0)),
            KernelMeasure::Lrb => (LrbDensitySpec::brownian(), self.process.terminal_law()),
        }
    }

    /// `p(u, t, x) = E[F(t + u, L_{t+u}) | L_t = x]`, for `u > 0`,
    /// `t + u < U`.
    pub fn propagator(&self, u: f64, t: f64, x: f64) -> Result<f64> {
        check_time(self.horizon(), t)?;
        if !(u > 0.0) {
            return Err(domain(format!("propagator needs u > 0, got {u}")));
        }
        check_time(self.horizon(), t + u)?;
        self.propagator_inner(u, t, x)
    }

    /// Unguarded propagator used inside time integrals; only requires
    /// `t + u < U`.
    fn propagator_inner(&self, u: f64, t: f64, x: f64) -> Result<f64> {
        let horizon = self.horizon();
        let tau = t + u;
        if !(tau < horizon) {
            return Err(domain(format!("t + u = {tau} must be below U = {horizon}")));
        }
        match self.measure {
            KernelMeasure::Bridge => {
                let ratio = (horizon - tau) / (horizon - t);
                let law = GaussianLaw { mean: x * ratio, variance: u * ratio };
                gaussian_tilted_expectation(&self.terminal, horizon, tau, law)
            }
            KernelMeasure::Lrb => {
                let (spec, nu) = self.lrb_spec();
                let law = bridge_conditional_law(horizon, t, tau, x)
                    .unwrap_or(GaussianLaw { mean: x, variance: u });
                let den = spec.psi(&nu, horizon, t, x)?;
                numerics::integrate_real_line(
                    |y| {
                        let d = spec.psi(&nu, horizon, tau, y)? / den * spec.rho.density(u, y - x);
                        Ok(if d == 0.0 { 0.0 } else { self.terminal.eval(horizon, tau, y) * d })
                    },
                    law.mean,
                    law.sd().max(1e-300),
                    &self.quadrature,
                )
            }
        }
    }

    /// Weighted heat kernel by time quadrature, ignoring any closed form.
    pub fn weighted_heat_kernel_quadrature(&self, t: f64, x: f64) -> Result<f64> {
        check_time(self.horizon(), t)?;
        let span = self.horizon() - t;
        numerics::integrate_to_endpoint(
            |u| self.time_integrand(u, t, x, t, u),
            0.0,
            span,
            &self.quadrature,
        )
    }

    /// `p(u, t, x) * w(t_w, u_w)`; zero-weight points skip the propagator.
    fn time_integrand(&self, u: f64, t: f64, x: f64, t_w: f64, u_w: f64) -> Result<f64> {
        if u <= 0.0 || t + u >= self.horizon() {
            // open endpoints; GK never samples them except through roundoff
            return Ok(0.0);
        }
        let w = self.weight.eval(self.horizon(), t_w, u_w);
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(self.propagator_inner(u, t, x)? * w)
    }

    /// `f(t, x)`, through the closed form when the model is tagged.
    pub fn weighted_heat_kernel(&self, t: f64, x: f64) -> Result<f64> {
        check_time(self.horizon(), t)?;
        match (self.closed_form, &self.weight) {
            (Some(ClosedFormTag::Quadratic), _) => Ok(closed_form::quadratic_heat_kernel(self.horizon(), t, x)),
            (Some(ClosedFormTag::ExponentialQuadratic), WeightFunctionSpec::Power { eta }) => {
                closed_form::expquad_heat_kernel(self.horizon(), *eta, t, x)
            }
            _ => self.weighted_heat_kernel_quadrature(t, x),
        }
    }

    /// `E[f(T, L_T) | L_t = x] = ∫_{T-t}^{U-t} p(u, t, x) w(T, u - (T - t)) du`.
    pub fn bond_numerator(&self, t: f64, maturity: f64, x: f64) -> Result<f64> {
        let lag = maturity - t;
        self.bond_numerator_with(t, maturity, x, |u| u - lag)
    }

    /// Bond numerator with the weight evaluated at `w(T, weight_arg(u))`.
    /// Only useful for comparing against misprinted variants.
    pub fn bond_numerator_with<A>(&self, t: f64, maturity: f64, x: f64, weight_arg: A) -> Result<f64>
    where
        A: Fn(f64) -> f64,
    {
        self.check_pair(t, maturity)?;
        numerics::integrate_to_endpoint(
            |u| self.time_integrand(u, t, x, maturity, weight_arg(u)),
            maturity - t,
            self.horizon() - t,
            &self.quadrature,
        )
    }

    fn check_pair(&self, t: f64, maturity: f64) -> Result<()> {
        check_time(self.horizon(), t)?;
        check_time(self.horizon(), maturity)?;
        if maturity < t {
            return Err(domain(format!("maturity {maturity} precedes valuation time {t}")));
        }
        Ok(())
    }

    /// Discount bond price `P_tT` by quadrature.
    pub fn price_bond(&self, t: f64, maturity: f64, x: f64) -> Result<f64> {
        self.check_pair(t, maturity)?;
        if maturity == t {
            return Ok(1.0);
        }
        let num = self.bond_numerator(t, maturity, x)?;
        let den = self.weighted_heat_kernel_quadrature(t, x)?;
        Ok(num / den)
    }

    /// Density of `L_t = y` given `L_s = x` under the kernel's measure,
    /// through the Lévy random bridge formula.
    pub fn transition_density(&self, s: f64, t: f64, x: f64, y: f64) -> Result<f64> {
        let (spec, nu) = self.lrb_spec();
        spec.transition_density(&nu, self.horizon(), s, t, x, y)
    }

    /// `E[g(L_t) | L_s = x]` under the kernel's measure by adaptive
    /// quadrature on the real line.
    pub fn conditional_expectation<G>(&self, s: f64, t: f64, x: f64, mut g: G) -> Result<f64>
    where
        G: FnMut(f64) -> Result<f64>,
    {
        let law = bridge_conditional_law(self.horizon(), s, t, x)?;
        if law.variance == 0.0 {
            return g(x);
        }
        match self.measure {
            KernelMeasure::Bridge => numerics::integrate_real_line(
                |y| {
                    let d = law.density(y);
                    if d == 0.0 {
                        Ok(0.0)
                    } else {
                        Ok(g(y)? * d)
                    }
                },
                law.mean,
                law.sd(),
                &self.quadrature,
            ),
            KernelMeasure::Lrb => numerics::integrate_real_line(
                |y| {
                    let d = self.transition_density(s, t, x, y)?;
                    if d == 0.0 {
                        Ok(0.0)
                    } else {
                        Ok(g(y)? * d)
                    }
                },
                law.mean,
                law.sd(),
                &self.quadrature,
            ),
        }
    }

    /// Price at t of a claim paying `payoff(L_T)` at T:
    /// `E[f(T, L_T) payoff(L_T) | L_t = x] / f(t, x)`.
    pub fn price_asset<P>(&self, t: f64, maturity: f64, x: f64, payoff: P) -> Result<f64>
    where
        P: Fn(f64) -> f64,
    {
        self.check_pair(t, maturity)?;
        if maturity == t {
            return Ok(payoff(x));
        }
        let den = self.weighted_heat_kernel_quadrature(t, x)?;
        let num = self.conditional_expectation(t, maturity, x, |y| {
            let h = payoff(y);
            if h == 0.0 {
                return Ok(0.0);
            }
            if !h.is_finite() {
                return Err(Error::Divergence(format!("payoff is {h} at {y}")));
            }
            Ok(self.weighted_heat_kernel_quadrature(maturity, y)? * h)
        })?;
        Ok(num / den)
    }
}

impl KernelFunction for KernelModel {
    fn horizon(&self) -> f64 {
        self.process.horizon
    }

    fn value(&self, t: f64, x: f64) -> Result<f64> {
        self.weighted_heat_kernel(t, x)
    }
}

/// `E[F(tau, Y)]` for `Y ~ law` using the Gaussian factor of `F`: the
/// exponential part is absorbed into a tilted Gaussian and the polynomial
/// residual is integrated exactly by Gauss–Hermite.
fn gaussian_tilted_expectation(
    terminal: &TerminalFunctionSpec,
    horizon: f64,
    tau: f64,
    law: GaussianLaw,
) -> Result<f64> {
    let fac = terminal.factor(horizon, tau);
    let (m, v) = (law.mean, law.variance);
    let shrink = 1.0 - fac.gamma * v;
    if !(shrink > 0.0) {
        return Err(Error::Divergence(format!(
            "gamma * variance = {} >= 1 at tau = {tau}",
            fac.gamma * v
        )));
    }
    let log_norm = -0.5 * shrink.ln()
        + (fac.gamma * m * m + 2.0 * fac.beta * m + fac.beta * fac.beta * v) / (2.0 * shrink);
    let tilted_mean = (m + fac.beta * v) / shrink;
    let tilted_var = v / shrink;
    let rule = GaussHermiteRule::cached(fac.residual_nodes);
    let residual = rule.expect(tilted_mean, tilted_var, |y| terminal.residual(y));
    let out = log_norm.exp() * residual;
    if !out.is_finite() {
        return Err(Error::Divergence(format!("propagator overflow at tau = {tau}")));
    }
    Ok(out)
}
