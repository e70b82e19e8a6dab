use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{CheckReport, Worst};
use crate::error::{domain, Result};
use crate::kernel::KernelFunction;
use crate::numerics::{gaussian_expectation, integrate, normal, QuadratureConfig};
use crate::process::{bridge_conditional_law, simulation::path_rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SupermartingaleMethod {
    /// Gauss–Hermite conditional expectation; fails when
    /// `E_B[f(t, L_t) | L_s = x] - f(s, x)` exceeds `slack`.
    Quadrature { slack: f64 },
    /// Common random numbers across all `(s, t, x)`; the statistic is
    /// `(mean - f(s, x)) / SE`, failing above `z_max`.
    MonteCarlo { n_paths: usize, seed: u64, z_max: f64 },
}

impl Default for SupermartingaleMethod {
    fn default() -> Self {
        SupermartingaleMethod::Quadrature { slack: 1e-10 }
    }
}

const CHUNK: usize = 4096;

/// Sum and sum of squares over chunks in a fixed order, so the result does
/// not depend on the thread count.
fn moments<F: Fn(f64) -> Result<f64> + Sync>(z: &[f64], g: F) -> Result<(f64, f64)> {
    let parts = z
        .par_chunks(CHUNK)
        .map(|c| {
            let (mut s, mut s2) = (0.0, 0.0);
            for &zi in c {
                let v = g(zi)?;
                s += v;
                s2 += v * v;
            }
            Ok((s, s2))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1)))
}

/// Gauss–Hermite first; integrands that grow too fast for the ladder fall
/// back to adaptive quadrature on the real line.
pub(crate) fn conditional_mean<K: KernelFunction + ?Sized>(f: &K, t: f64, mean: f64, variance: f64) -> Result<f64> {
    let g = |y: f64| f.value(t, y).unwrap_or(f64::NAN);
    match gaussian_expectation(mean, variance, 1e-13, g) {
        Ok(v) if v.is_finite() => Ok(v),
        _ => {
            // the Gaussian density underflows beyond 37.5 sd
            let reach = 37.5 * variance.sqrt();
            integrate(
                |y| {
                    let d = normal::density(y, mean, variance);
                    if d == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(f.value(t, y)? * d)
                },
                mean - reach,
                mean + reach,
                &QuadratureConfig::tight(),
            )
        }
    }
}

/// Checks `E_B[f(t, L_t) | L_s = x] <= f(s, x)` for every pair and start
/// point, with `L` a standard Brownian bridge on `[0, U]`.
pub fn check_supermartingale<K: KernelFunction + ?Sized>(
    f: &K,
    time_pairs: &[(f64, f64)],
    x_grid: &[f64],
    method: SupermartingaleMethod,
) -> Result<CheckReport> {
    let started = Instant::now();
    let horizon = f.horizon();
    for &(s, t) in time_pairs {
        if !(0.0 <= s && s < t) {
            return Err(domain(format!("need 0 <= s < t, got ({s}, {t})")));
        }
        crate::process::check_time(horizon, t)?;
    }
    let mut worst = Worst::new();
    let mut samples = 0u64;
    match method {
        SupermartingaleMethod::Quadrature { slack } => {
            for &(s, t) in time_pairs {
                for &x in x_grid {
                    let law = bridge_conditional_law(horizon, s, t, x)?;
                    let e = conditional_mean(f, t, law.mean, law.variance)?;
                    let gap = e - f.value(s, x)?;
                    worst.offer(gap, &[("s", s), ("t", t), ("x", x), ("excess", gap)]);
                    samples += 1;
                }
            }
            Ok(CheckReport::new("supermartingale.quadrature", worst.value, slack, worst.at, samples, started))
        }
        SupermartingaleMethod::MonteCarlo { n_paths, seed, z_max } => {
            if n_paths < 2 {
                return Err(domain("Monte Carlo check needs at least 2 paths"));
            }
            let mut rng = path_rng(seed, 0);
            let z: Vec<f64> = (0..n_paths).map(|_| rng.sample(StandardNormal)).collect();
            let n = n_paths as f64;
            for &(s, t) in time_pairs {
                for &x in x_grid {
                    let law = bridge_conditional_law(horizon, s, t, x)?;
                    let sd = law.sd();
                    let (sum, sum2) = moments(&z, |zi| f.value(t, law.mean + sd * zi))?;
                    let mean = sum / n;
                    let var = ((sum2 - n * mean * mean) / (n - 1.0)).max(0.0);
                    let se = (var / n).sqrt();
                    let gap = mean - f.value(s, x)?;
                    let stat = if se > 0.0 { gap / se } else if gap > 0.0 { f64::INFINITY } else { 0.0 };
                    worst.offer(stat, &[("s", s), ("t", t), ("x", x), ("excess", gap), ("se", se)]);
                    samples += n_paths as u64;
                }
            }
            Ok(CheckReport::new("supermartingale.monte_carlo", worst.value, z_max, worst.at, samples, started))
        }
    }
}
