//! Prior laws for the terminal economic factor.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::gauss_legendre::GaussLegendreRule;

/// Law of the terminal factor revealed at the horizon.
///
/// JSON form is internally tagged:
/// `{"type":"discrete","atoms":[[0.0,0.5],[1.0,0.5]]}`,
/// `{"type":"gaussian","mean":0.0,"variance":1.0}`,
/// `{"type":"uniform","lo":-1.0,"hi":1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PriorLaw {
    /// Atoms as `(value, weight)` pairs.
    Discrete { atoms: Vec<(f64, f64)> },
    Gaussian { mean: f64, variance: f64 },
    Uniform { lo: f64, hi: f64 },
}

/// Normalizer and mean of an exponentially tilted prior.
///
/// The tilt is `exp(alpha x - beta x^2 / 2)`; `log_partition` is the log of
/// `∫ ν(dx) exp(alpha x - beta x^2 / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tilted {
    pub log_partition: f64,
    pub mean: f64,
}

const WEIGHT_TOL: f64 = 1e-12;

impl PriorLaw {
    pub fn point_mass(z: f64) -> Self {
        PriorLaw::Discrete { atoms: vec![(z, 1.0)] }
    }

    /// Equal-weight atoms.
    pub fn equal_atoms(values: &[f64]) -> Self {
        let w = 1.0 / values.len() as f64;
        PriorLaw::Discrete { atoms: values.iter().map(|&v| (v, w)).collect() }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PriorLaw::Discrete { atoms } => {
                if atoms.is_empty() {
                    return Err(invalid("discrete prior needs at least one atom"));
                }
                let mut total = 0.0;
                for &(v, w) in atoms {
                    if !v.is_finite() || !w.is_finite() || w < 0.0 {
                        return Err(invalid(format!("bad atom ({v}, {w})")));
                    }
                    total += w;
                }
                if (total - 1.0).abs() > WEIGHT_TOL {
                    return Err(invalid(format!("atom weights sum to {total}, not 1")));
                }
            }
            PriorLaw::Gaussian { mean, variance } => {
                if !mean.is_finite() || !(variance.is_finite() && *variance > 0.0) {
                    return Err(invalid(format!("gaussian prior needs variance > 0, got {variance}")));
                }
            }
            PriorLaw::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(invalid(format!("uniform prior needs lo < hi, got [{lo}, {hi}]")));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            PriorLaw::Discrete { atoms } => atoms.iter().map(|(v, w)| v * w).sum(),
            PriorLaw::Gaussian { mean, .. } => *mean,
            PriorLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }

    /// Smallest closed interval containing the support.
    pub fn support_hull(&self) -> (f64, f64) {
        match self {
            PriorLaw::Discrete { atoms } => atoms
                .iter()
                .filter(|(_, w)| *w > 0.0)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, _)| (lo.min(*v), hi.max(*v))),
            PriorLaw::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            PriorLaw::Uniform { lo, hi } => (*lo, *hi),
        }
    }

    /// Law of `c * X` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        match self {
            PriorLaw::Discrete { atoms } => {
                PriorLaw::Discrete { atoms: atoms.iter().map(|&(v, w)| (c * v, w)).collect() }
            }
            PriorLaw::Gaussian { mean, variance } => {
                PriorLaw::Gaussian { mean: c * mean, variance: c * c * variance }
            }
            PriorLaw::Uniform { lo, hi } => PriorLaw::Uniform { lo: c * lo, hi: c * hi },
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            PriorLaw::Discrete { atoms } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(v, w) in atoms {
                    acc += w;
                    if u < acc {
                        return v;
                    }
                }
                atoms.iter().rev().find(|(_, w)| *w > 0.0).map(|(v, _)| *v).unwrap_or(atoms[0].0)
            }
            PriorLaw::Gaussian { mean, variance } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + variance.sqrt() * z
            }
            PriorLaw::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
        }
    }

    /// Normalizer and mean of the prior tilted by `exp(alpha x - beta x^2 / 2)`,
    /// `beta >= 0`. Exact for atoms and Gaussians; Gauss–Legendre on the
    /// support for the uniform law.
    pub fn tilt(&self, alpha: f64, beta: f64) -> Result<Tilted> {
        let out = match self {
            PriorLaw::Discrete { atoms } => {
                let exps: Vec<(f64, f64)> = atoms
                    .iter()
                    .filter(|(_, w)| *w > 0.0)
                    .map(|&(x, w)| (x, w.ln() + alpha * x - 0.5 * beta * x * x))
                    .collect();
                let m = exps.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
                let (mut z, mut zx) = (0.0, 0.0);
                for (x, e) in exps {
                    let p = (e - m).exp();
                    z += p;
                    zx += p * x;
                }
                Tilted { log_partition: m + z.ln(), mean: zx / z }
            }
            PriorLaw::Gaussian { mean, variance } => {
                let p = 1.0 / variance + beta;
                let q = mean / variance + alpha;
                Tilted {
                    log_partition: -0.5 * (variance * p).ln() + 0.5 * q * q / p
                        - 0.5 * mean * mean / variance,
                    mean: q / p,
                }
            }
            PriorLaw::Uniform { lo, hi } => uniform_tilt(*lo, *hi, alpha, beta),
        };
        if !(out.log_partition.is_finite() && out.mean.is_finite()) {
            return Err(Error::Divergence(format!(
                "tilted prior not normalizable (alpha={alpha}, beta={beta})"
            )));
        }
        Ok(out)
    }
}

/// Panels break at the tilt mode and at 3, 8 and 20 standard deviations
/// either side of it.
fn uniform_tilt(lo: f64, hi: f64, alpha: f64, beta: f64) -> Tilted {
    let rule = GaussLegendreRule::new(20);
    let exponent = |x: f64| alpha * x - 0.5 * beta * x * x;
    let mut breaks = vec![lo, hi];
    let peak = if beta > 0.0 {
        let mode = alpha / beta;
        let sd = beta.sqrt().recip();
        for k in [-20.0, -8.0, -3.0, 0.0, 3.0, 8.0, 20.0] {
            let b = mode + k * sd;
            if b > lo && b < hi {
                breaks.push(b);
            }
        }
        mode.clamp(lo, hi)
    } else if alpha >= 0.0 {
        hi
    } else {
        lo
    };
    let shift = exponent(peak).max(exponent(lo)).max(exponent(hi));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let (mut z, mut zx) = (0.0, 0.0);
    for win in breaks.windows(2) {
        let panels = if beta > 0.0 { 1 } else { 16 };
        z += rule.integrate_composite(win[0], win[1], panels, |x| (exponent(x) - shift).exp());
        zx += rule.integrate_composite(win[0], win[1], panels, |x| x * (exponent(x) - shift).exp());
    }
    Tilted { log_partition: shift + (z / (hi - lo)).ln(), mean: zx / z }
}
