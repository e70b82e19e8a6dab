use serde::{Deserialize, Serialize};

use crate::closed_form::QuadraticModel;
use crate::error::{domain, invalid, Result};
use crate::process::check_time;

/// A European call with maturity `t` on a discount bond maturing at `T`,
/// valued at `s` given `L_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    pub s: f64,
    pub t: f64,
    #[serde(rename = "T")]
    pub maturity: f64,
    #[serde(rename = "K")]
    pub strike: f64,
    #[serde(rename = "L_s")]
    pub l_s: f64,
}

impl OptionSpec {
    pub fn new(s: f64, t: f64, maturity: f64, strike: f64, l_s: f64) -> Self {
        Self { s, t, maturity, strike, l_s }
    }

    /// `0 <= s <= t <= T < U`, `K >= 0`, finite `L_s`.
    pub fn validate(&self, horizon: f64) -> Result<()> {
        for v in [self.s, self.t, self.maturity] {
            check_time(horizon, v)?;
        }
        if !(self.s <= self.t && self.t <= self.maturity) {
            return Err(domain(format!(
                "need s <= t <= T, got s={} t={} T={}",
                self.s, self.t, self.maturity
            )));
        }
        if !(self.strike >= 0.0 && self.strike.is_finite()) {
            return Err(invalid(format!("strike must be >= 0, got {}", self.strike)));
        }
        if !self.l_s.is_finite() {
            return Err(invalid("L_s must be finite"));
        }
        Ok(())
    }

    pub fn is_immediate(&self) -> bool {
        self.s == self.t
    }

    pub fn with_strike(self, strike: f64) -> Self {
        Self { strike, ..self }
    }
}

/// Coefficients of the option integrand `c y^2 + b y + a` against the
/// standard normal density, with `y` the standardized `L_t | L_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadCoeffs {
    #[serde(rename = "A")]
    pub big_a: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub nu_st: f64,
    /// Sorted real roots, present iff `c != 0` and the discriminant is positive.
    pub roots: Option<(f64, f64)>,
    /// `b^2 - 4ac`, evaluated as `-4 A B nu^2`.
    pub discriminant: f64,
}

impl QuadCoeffs {
    pub fn poly(&self, y: f64) -> f64 {
        (self.c * y + self.b) * y + self.a
    }

    /// `b^2 - 4ac` computed directly, for checking the identity.
    pub fn direct_discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }
}

/// Coefficients for the quadratic model. With `s = t` the spread `nu_st`
/// is zero and only `a` is meaningful; pricing treats that as immediate
/// exercise.
pub fn quad_option_coeffs(model: &QuadraticModel, spec: &OptionSpec) -> Result<QuadCoeffs> {
    let u = model.horizon();
    spec.validate(u)?;
    let OptionSpec { s, t, maturity, strike: k, l_s } = *spec;
    let (d_s, d_t, d_m) = (u - s, u - t, u - maturity);
    let d_m3 = d_m * d_m * d_m;
    let d_t3 = d_t * d_t * d_t;
    let big_a = 0.25 * (maturity - t) * d_m3 / d_t + (d_m3 - k * d_t3) / 12.0;
    let big_b = 0.25 * (d_m3 * d_m / (d_t * d_t) - k * d_t * d_t);
    let ratio = d_t / d_s;
    let nu2 = (t - s) * d_t / d_s;
    let nu = nu2.sqrt();
    let a = big_a + big_b * ratio * ratio * l_s * l_s;
    let b = 2.0 * big_b * nu * ratio * l_s;
    let c = big_b * nu2;
    let discriminant = -4.0 * big_a * big_b * nu2;
    let roots = (c != 0.0 && discriminant > 0.0).then(|| sorted_roots(a, b, c, discriminant));
    Ok(QuadCoeffs { big_a, big_b, a, b, c, nu_st: nu, roots, discriminant })
}

fn sorted_roots(a: f64, b: f64, c: f64, disc: f64) -> (f64, f64) {
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let r1 = q / c;
    let r2 = if q != 0.0 { a / q } else { -r1 };
    if r1 <= r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}
