use serde::Serialize;

use super::coeffs::OptionSpec;
use crate::error::{invalid, Error, Result};
use crate::closed_form::ExpQuadraticModel;
use crate::kernel::KernelModel;
use crate::numerics::{self, QuadratureConfig};

/// Scan-grid size used to locate sign changes of the exercise function.
pub const SCAN_POINTS: usize = 512;
const MAX_SIGN_CHANGES: usize = 8;
const ROOT_TOL: f64 = 1e-12;
const BRACKET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericOptionQuote {
    pub price: f64,
    /// Points in the bracket where `I(t, z) - K pi(t, z)` changes sign.
    pub exercise_boundary: Vec<f64>,
}

fn bisect<H: FnMut(f64) -> Result<f64>>(h: &mut H, mut lo: f64, mut hi: f64, h_lo: f64) -> Result<f64> {
    let lo_pos = h_lo > 0.0;
    while hi - lo > ROOT_TOL * (1.0 + lo.abs().max(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (h(mid)? > 0.0) == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Call price for any kernel model: with `h(z) = I(t, z) - K pi(t, z)`,
/// `C = (1 / pi(s, L_s)) ∫ h^+(z) q(s, L_s; t, z) dz` over the bracket,
/// where `I` is the bond numerator and `q` the transition density under the
/// kernel's measure.
pub fn lrb_option_price_generic(
    model: &KernelModel,
    spec: &OptionSpec,
    bracket: (f64, f64),
) -> Result<GenericOptionQuote> {
    spec.validate(model.horizon())?;
    let (z_min, z_max) = bracket;
    check_bracket(bracket)?;
    let OptionSpec { s, t, maturity, strike, l_s } = *spec;
    if spec.is_immediate() {
        let p = model.price_bond(t, maturity, l_s)?;
        return Ok(GenericOptionQuote { price: (p - strike).max(0.0), exercise_boundary: Vec::new() });
    }

    let h = |z: f64| -> Result<f64> {
        let num = model.bond_numerator(t, maturity, z)?;
        if strike == 0.0 {
            return Ok(num);
        }
        Ok(num - strike * model.weighted_heat_kernel_quadrature(t, z)?)
    };
    let density = |z: f64| model.transition_density(s, t, l_s, z);
    let denominator = model.weighted_heat_kernel_quadrature(s, l_s)?;
    scan_and_integrate(h, density, (z_min, z_max), &model.quadrature, denominator)
}

/// Call price under the modified exponential-quadratic family, whose kernel
/// `M_t f~(t, L_t)` is not a plain weighted heat kernel. Same scan as
/// [`lrb_option_price_generic`] with `h(z) = f~(t, z) (P_tT(z) - K)` and the
/// bridge density.
pub fn expquad_option_price(
    model: &ExpQuadraticModel,
    spec: &OptionSpec,
    bracket: (f64, f64),
) -> Result<GenericOptionQuote> {
    spec.validate(model.horizon())?;
    check_bracket(bracket)?;
    let OptionSpec { s, t, maturity, strike, l_s } = *spec;
    if spec.is_immediate() {
        let p = model.bond_price(t, maturity, l_s)?;
        return Ok(GenericOptionQuote { price: (p - strike).max(0.0), exercise_boundary: Vec::new() });
    }
    let h = |z: f64| -> Result<f64> { Ok(model.f_tilde(t, z)? * (model.bond_price(t, maturity, z)? - strike)) };
    let law = model.process.bridge_conditional_law(s, t, l_s)?;
    let density = |z: f64| Ok(law.density(z));
    let denominator = model.f_tilde(s, l_s)?;
    scan_and_integrate(h, density, bracket, &QuadratureConfig::default(), denominator)
}

fn check_bracket((z_min, z_max): (f64, f64)) -> Result<()> {
    if !(z_min < z_max && z_min.is_finite() && z_max.is_finite()) {
        return Err(invalid(format!("bad bracket ({z_min}, {z_max})")));
    }
    Ok(())
}

/// `(1 / denominator) ∫ h^+(z) density(z) dz` over the bracket, splitting at
/// the sign changes of `h`.
fn scan_and_integrate<H, D>(
    mut h: H,
    density: D,
    (z_min, z_max): (f64, f64),
    cfg: &QuadratureConfig,
    denominator: f64,
) -> Result<GenericOptionQuote>
where
    H: FnMut(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    for z in [z_min, z_max] {
        let residual = h(z)?.abs() * density(z)?;
        if !(residual < BRACKET_TOL) {
            return Err(Error::BracketTooNarrow { at: z, residual });
        }
    }

    let step = (z_max - z_min) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| z_min + step * i as f64).collect();
    let values = grid.iter().map(|&z| h(z)).collect::<Result<Vec<_>>>()?;
    let changes: Vec<usize> = (1..SCAN_POINTS).filter(|&i| (values[i - 1] > 0.0) != (values[i] > 0.0)).collect();
    if changes.len() > MAX_SIGN_CHANGES {
        return Err(Error::TooManySignChanges(changes.len()));
    }
    let mut boundary = Vec::with_capacity(changes.len());
    for &i in &changes {
        boundary.push(bisect(&mut h, grid[i - 1], grid[i], values[i - 1])?);
    }

    let mut edges = Vec::with_capacity(boundary.len() + 2);
    edges.push(z_min);
    edges.extend_from_slice(&boundary);
    edges.push(z_max);
    let mut positive_sign = values[0] > 0.0;
    let mut total = 0.0;
    for w in edges.windows(2) {
        if positive_sign && w[1] > w[0] {
            total += numerics::integrate(|z| Ok(h(z)?.max(0.0) * density(z)?), w[0], w[1], cfg)?;
        }
        positive_sign = !positive_sign;
    }
    let price = total / denominator;
    Ok(GenericOptionQuote { price: price.max(0.0), exercise_boundary: boundary })
}
