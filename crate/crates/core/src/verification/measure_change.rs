use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{CheckReport, Worst};
use crate::error::{domain, Result};
use crate::process::simulation::{fill_path, path_rng, validate_grid};
use crate::process::{InformationModel, Measure};

/// Discretization of `dM / M = -theta dW` along simulated paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdeScheme {
    /// `M += -theta M dW`.
    Euler,
    /// Euler on `log M`.
    LogEuler,
    /// Log-Euler plus the Milstein correction `-theta_L (dW^2 - dt) / 2`.
    #[default]
    Milstein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasureChangeConfig {
    pub t_grid: Vec<f64>,
    /// Paths for the `E_P[M_t] = 1` test.
    pub n_paths: usize,
    /// Paths integrated on the fine grid for the SDE and innovation tests.
    pub sde_paths: usize,
    pub seed: u64,
    /// Fine-grid step as a fraction of `U`.
    pub step_fraction: f64,
    pub scheme: SdeScheme,
    pub z_max: f64,
    pub rms_tol: f64,
    /// Multiplies the closed-form `M` in the mean test. Anything but 1 is a
    /// deliberate fault.
    pub m_scale: f64,
}

impl Default for MeasureChangeConfig {
    fn default() -> Self {
        Self {
            t_grid: (1..=9).map(f64::from).collect(),
            n_paths: 100_000,
            sde_paths: 10_000,
            seed: 0,
            step_fraction: 1e-3,
            scheme: SdeScheme::default(),
            z_max: 3.0,
            rms_tol: 1e-2,
            m_scale: 1.0,
        }
    }
}

fn z_stat(gap: f64, se: f64) -> f64 {
    if se > 0.0 {
        (gap / se).abs()
    } else if gap == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// `∂theta / ∂L` by a central difference of the posterior mean.
fn theta_slope(model: &InformationModel, t: f64, ell: f64) -> Result<f64> {
    let h = 1e-5 * (1.0 + ell.abs());
    Ok((model.innovation_drift(t, ell + h)? - model.innovation_drift(t, ell - h)?) / (2.0 * h))
}

struct FinePath {
    /// `M_euler / M_closed - 1` at each checkpoint.
    rel_err: Vec<f64>,
    /// Reconstructed innovation at each checkpoint.
    w: Vec<f64>,
}

fn integrate_path(
    model: &InformationModel,
    fine: &[f64],
    checkpoints: &[usize],
    scheme: SdeScheme,
    seed: u64,
    index: u64,
) -> Result<FinePath> {
    let mut l = vec![0.0; fine.len()];
    fill_path(model, fine, Measure::P, &mut path_rng(seed, index), &mut l)?;
    let u = model.horizon;
    let (mut t_prev, mut l_prev) = (0.0, 0.0);
    let (mut m, mut log_m, mut w) = (1.0, 0.0, 0.0);
    let mut out = FinePath { rel_err: Vec::with_capacity(checkpoints.len()), w: Vec::with_capacity(checkpoints.len()) };
    let mut next = checkpoints.iter().peekable();
    for (k, (&t, &ell)) in fine.iter().zip(&l).enumerate() {
        let dt = t - t_prev;
        let theta = model.innovation_drift(t_prev, l_prev)?;
        let dw = ell - l_prev + (l_prev / (u - t_prev) - theta) * dt;
        match scheme {
            SdeScheme::Euler => m *= 1.0 - theta * dw,
            SdeScheme::LogEuler => log_m -= theta * dw + 0.5 * theta * theta * dt,
            SdeScheme::Milstein => {
                let slope = theta_slope(model, t_prev, l_prev)?;
                log_m -= theta * dw + 0.5 * theta * theta * dt + 0.5 * slope * (dw * dw - dt);
            }
        }
        w += dw;
        if next.peek() == Some(&&k) {
            next.next();
            let approx = if scheme == SdeScheme::Euler { m } else { log_m.exp() };
            out.rel_err.push(approx / model.measure_change_martingale(t, ell)? - 1.0);
            out.w.push(w);
        }
        t_prev = t;
        l_prev = ell;
    }
    Ok(out)
}

/// Three checks of the change of measure from P to the bridge measure:
/// `E_P[M_t] = 1`, the SDE for `M` against its closed form, and the
/// variance of the reconstructed innovation `W_t`.
pub fn check_measure_change(model: &InformationModel, cfg: &MeasureChangeConfig) -> Result<Vec<CheckReport>> {
    model.validate()?;
    validate_grid(model, &cfg.t_grid)?;
    if cfg.n_paths < 2 || cfg.sde_paths < 2 {
        return Err(domain("measure-change checks need at least 2 paths"));
    }
    if !(cfg.step_fraction > 0.0 && cfg.step_fraction < 1.0) {
        return Err(domain("step_fraction must lie in (0, 1)"));
    }
    let mut reports = Vec::with_capacity(3);

    let started = Instant::now();
    let grid = &cfg.t_grid;
    let m_values = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut l = vec![0.0; grid.len()];
            fill_path(model, grid, Measure::P, &mut path_rng(cfg.seed, i), &mut l)?;
            grid.iter()
                .zip(&l)
                .map(|(&t, &ell)| Ok(cfg.m_scale * model.measure_change_martingale(t, ell)?))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = cfg.n_paths as f64;
    let mut worst = Worst::new();
    for (j, &t) in grid.iter().enumerate() {
        let mean = m_values.iter().map(|v| v[j]).sum::<f64>() / n;
        let var = m_values.iter().map(|v| (v[j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        worst.offer(z_stat(mean - 1.0, se), &[("t", t), ("mean", mean), ("se", se)]);
    }
    reports.push(CheckReport::new(
        "measure_change.mean",
        worst.value,
        cfg.z_max,
        worst.at,
        cfg.n_paths as u64,
        started,
    ));

    let started = Instant::now();
    let dt = cfg.step_fraction * model.horizon;
    let t_max = grid.iter().cloned().fold(0.0, f64::max);
    let steps = (t_max / dt).round() as usize;
    let fine: Vec<f64> = (1..=steps).map(|k| k as f64 * dt).collect();
    validate_grid(model, &fine)?;
    let checkpoints: Vec<usize> = grid
        .iter()
        .filter(|&&t| t > 0.0)
        .map(|&t| ((t / dt).round() as usize).clamp(1, steps) - 1)
        .collect();
    let seed = cfg.seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let paths = (0..cfg.sde_paths as u64)
        .into_par_iter()
        .map(|i| integrate_path(model, &fine, &checkpoints, cfg.scheme, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let n = cfg.sde_paths as f64;
    let mut worst_rms = Worst::new();
    let mut worst_var = Worst::new();
    for (j, &k) in checkpoints.iter().enumerate() {
        let t = fine[k];
        let rms = (paths.iter().map(|p| p.rel_err[j].powi(2)).sum::<f64>() / n).sqrt();
        worst_rms.offer(rms, &[("t", t), ("rms", rms)]);
        let mean = paths.iter().map(|p| p.w[j]).sum::<f64>() / n;
        let var = paths.iter().map(|p| (p.w[j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = t * (2.0 / (n - 1.0)).sqrt();
        worst_var.offer(z_stat(var - t, se), &[("t", t), ("variance", var), ("se", se)]);
    }
    let steps_used = (cfg.sde_paths * steps) as u64;
    reports.push(
        CheckReport::new("measure_change.sde", worst_rms.value, cfg.rms_tol, worst_rms.at, steps_used, started)
            .with_note(format!("{:?} scheme, dt = {dt}, relative pathwise RMS", cfg.scheme)),
    );
    reports.push(CheckReport::new(
        "measure_change.innovation",
        worst_var.value,
        cfg.z_max,
        worst_var.at,
        cfg.sde_paths as u64,
        started,
    ));
    Ok(reports)
}
