use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::{CheckReport, Worst};
use crate::error::{domain, Error, Result};

/// Finite-difference steps for the partial differential inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeSteps {
    pub dt: f64,
    pub dx: f64,
}

impl PdeSteps {
    /// `dt = dx = 1e-4 U`.
    pub fn for_horizon(horizon: f64) -> Self {
        Self { dt: 1e-4 * horizon, dx: 1e-4 * horizon }
    }
}

/// A derivative estimated at steps `h`, `2h`, `4h`.
struct Ladder([f64; 3]);

impl Ladder {
    fn extrapolated(&self) -> f64 {
        (4.0 * self.0[0] - self.0[1]) / 3.0
    }

    /// The truncation error of a second-order difference scales as `h^2`,
    /// so successive differences shrink by about four. Differences at the
    /// roundoff level carry no information and are accepted.
    fn check(&self, noise: f64) -> Result<()> {
        let [d1, d2, d4] = self.0;
        let (near, far) = (d2 - d1, d4 - d2);
        if far.abs() <= noise || near.abs() <= noise {
            return Ok(());
        }
        let ratio = far / near;
        if !(2.0..=8.0).contains(&ratio) {
            return Err(Error::StepTooLarge { estimate: ratio });
        }
        Ok(())
    }
}

/// `(x / (U - t)) f_x - f_xx / 2 - f_t` at `(t, x)` by Richardson-extrapolated
/// finite differences. Time differences are one-sided near `t = 0`.
pub fn pde_lhs<F>(f: &F, horizon: f64, t: f64, x: f64, steps: PdeSteps) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let PdeSteps { dt, dx } = steps;
    if !(dt > 0.0 && dx > 0.0) {
        return Err(domain("finite-difference steps must be positive"));
    }
    if !(t >= 0.0 && t + 4.0 * dt < horizon) {
        return Err(domain(format!("t = {t} too close to the horizon for dt = {dt}")));
    }
    let f0 = f(t, x)?;
    let eps = f64::EPSILON * 1e4 * f0.abs().max(1e-300);

    let mut fx = [0.0; 3];
    let mut fxx = [0.0; 3];
    let mut ft = [0.0; 3];
    for (k, m) in [1.0, 2.0, 4.0].into_iter().enumerate() {
        let h = m * dx;
        let (up, dn) = (f(t, x + h)?, f(t, x - h)?);
        fx[k] = (up - dn) / (2.0 * h);
        fxx[k] = (up - 2.0 * f0 + dn) / (h * h);
        let k_t = m * dt;
        ft[k] = if t - 2.0 * k_t >= 0.0 {
            (f(t + k_t, x)? - f(t - k_t, x)?) / (2.0 * k_t)
        } else {
            (-3.0 * f0 + 4.0 * f(t + k_t, x)? - f(t + 2.0 * k_t, x)?) / (2.0 * k_t)
        };
    }
    let (fx, fxx, ft) = (Ladder(fx), Ladder(fxx), Ladder(ft));
    fx.check(eps / dx)?;
    fxx.check(eps / (dx * dx))?;
    ft.check(eps / dt)?;
    Ok(x / (horizon - t) * fx.extrapolated() - 0.5 * fxx.extrapolated() - ft.extrapolated())
}

/// Evaluates the left side over the grid; the check fails when its
/// minimum falls below `-tolerance`. A minimum within `tolerance` of zero
/// is reported as non-strict.
pub fn check_pde_inequality<F>(
    f: &F,
    horizon: f64,
    t_grid: &[f64],
    x_grid: &[f64],
    steps: PdeSteps,
    tolerance: f64,
) -> Result<CheckReport>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let started = Instant::now();
    let mut worst = Worst::new();
    let mut n = 0;
    for &t in t_grid {
        for &x in x_grid {
            let lhs = pde_lhs(f, horizon, t, x, steps)?;
            worst.offer(-lhs, &[("t", t), ("x", x), ("lhs", lhs)]);
            n += 1;
        }
    }
    let min_lhs = -worst.value;
    let report = CheckReport::new("pde_inequality", worst.value, tolerance, worst.at, n, started);
    Ok(if min_lhs.abs() <= tolerance {
        report.with_note("non-strict: minimum of the left side is zero")
    } else {
        report
    })
}
