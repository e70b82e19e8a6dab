use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::equivalence::{check_closed_form_equivalence, ClosedFormCatalogue, EquivalenceGrid};
use super::errata::errata_report;
use super::measure_change::{check_measure_change, MeasureChangeConfig};
use super::pde::{check_pde_inequality, PdeSteps};
use super::report::CheckReport;
use super::supermartingale::{check_supermartingale, SupermartingaleMethod};
use crate::closed_form::{DecayFunction, ExpQuadraticModel, G1Spec, QuadraticModel};
use crate::error::{invalid, Result};
use crate::kernel::{check_weight_validity, KernelModel};
use crate::process::{InformationModel, PriorLaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Default,
    Supermartingale,
    Pde,
    MeasureChange,
    ClosedForm,
    Errata,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Default, Suite::Supermartingale, Suite::Pde, Suite::MeasureChange, Suite::ClosedForm, Suite::Errata];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Default => "default",
            Suite::Supermartingale => "supermartingale",
            Suite::Pde => "pde",
            Suite::MeasureChange => "measure-change",
            Suite::ClosedForm => "closed-form",
            Suite::Errata => "errata",
        }
    }
}

impl FromStr for Suite {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| invalid(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    /// A user model checked alongside the shipped ones.
    pub model: Option<KernelModel>,
    pub seed: u64,
    pub mc_paths: usize,
    pub measure_change: MeasureChangeConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { model: None, seed: 0, mc_paths: 100_000, measure_change: MeasureChangeConfig::default() }
    }
}

/// `U = 10`, `sigma = 1`, `X` uniform on `{-0.1, 0.1}`. Small atoms keep
/// `M_t = 1 / Phi_t` bounded, so its Monte Carlo mean has finite variance.
pub fn shipped_process() -> InformationModel {
    InformationModel::new(1.0, 10.0, PriorLaw::equal_atoms(&[-0.1, 0.1])).expect("valid process")
}

/// Five starting times, five later times after each, seven start points.
pub fn supermartingale_grid(horizon: f64) -> (Vec<(f64, f64)>, Vec<f64>) {
    let last = 0.95 * horizon;
    let mut pairs = Vec::new();
    for i in 0..5 {
        let s = horizon * 0.16 * i as f64;
        for k in 1..=5 {
            pairs.push((s, s + (last - s) * k as f64 / 5.0));
        }
    }
    (pairs, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0])
}

fn supermartingale_reports(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let process = shipped_process();
    let (pairs, xs) = supermartingale_grid(process.horizon);
    let quad = QuadraticModel::new(process.clone())?;
    let expquad = ExpQuadraticModel::new(process, 1.0, DecayFunction::exponential(1.0), G1Spec::special())?;
    let q = SupermartingaleMethod::default();
    let mc = SupermartingaleMethod::MonteCarlo { n_paths: cfg.mc_paths, seed: cfg.seed, z_max: 3.0 };
    let mut out = Vec::new();
    for (label, method) in [("quadrature", q), ("monte_carlo", mc)] {
        let mut r = check_supermartingale(&quad, &pairs, &xs, method)?;
        r.check_name = format!("supermartingale.quadratic.{label}");
        out.push(r);
        let mut r = check_supermartingale(&expquad, &pairs, &xs, method)?;
        r.check_name = format!("supermartingale.expquad.{label}");
        out.push(r);
    }
    if let Some(model) = &cfg.model {
        out.extend(user_model_reports(model)?);
    }
    Ok(out)
}

/// Weight inequality scan plus the quadrature supermartingale check for a
/// user-supplied model.
fn user_model_reports(model: &KernelModel) -> Result<Vec<CheckReport>> {
    let started = std::time::Instant::now();
    let w = check_weight_validity(&model.weight, model.horizon(), 21)?;
    let at = w
        .witness
        .map(|(s, t, u)| vec![("s".to_string(), s), ("t".to_string(), t), ("u".to_string(), u)])
        .unwrap_or_default();
    let weight = CheckReport::new("user_model.weight_inequality", w.max_violation, crate::kernel::WEIGHT_TOL, at, 0, started);
    let horizon = model.horizon();
    let pairs: Vec<(f64, f64)> = [(0.0, 0.3), (0.0, 0.6), (0.2, 0.5), (0.4, 0.8), (0.6, 0.9)]
        .iter()
        .map(|&(s, t)| (s * horizon, t * horizon))
        .collect();
    let mut r = check_supermartingale(model, &pairs, &[-1.0, 0.0, 1.0], SupermartingaleMethod::default())?;
    r.check_name = "user_model.supermartingale".into();
    Ok(vec![weight, r])
}

fn pde_reports() -> Result<Vec<CheckReport>> {
    let m = QuadraticModel::new(shipped_process())?;
    let f = |t: f64, x: f64| m.f(t, x);
    let t_grid: Vec<f64> = (0..10).map(|i| i as f64).collect();
    let x_grid: Vec<f64> = (0..10).map(|i| 0.1 + 2.9 * i as f64 / 9.0).collect();
    let steps = PdeSteps::for_horizon(m.horizon());
    let mut strict = check_pde_inequality(&f, m.horizon(), &t_grid[..t_grid.len() - 1], &x_grid, steps, 1e-6)?;
    strict.check_name = "pde_inequality.quadratic".into();
    let mut edge = check_pde_inequality(&f, m.horizon(), &t_grid[..t_grid.len() - 1], &[0.0], steps, 1e-6)?;
    edge.check_name = "pde_inequality.quadratic_at_zero".into();
    Ok(vec![strict, edge])
}

fn measure_change_reports(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mc = MeasureChangeConfig { seed: cfg.seed, ..cfg.measure_change.clone() };
    check_measure_change(&shipped_process(), &mc)
}

fn closed_form_reports() -> Result<Vec<CheckReport>> {
    check_closed_form_equivalence(&ClosedFormCatalogue::standard(), &EquivalenceGrid::standard(10.0))
}

/// Runs one suite. `Default` runs all the others.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::Supermartingale => supermartingale_reports(cfg),
        Suite::Pde => pde_reports(),
        Suite::MeasureChange => measure_change_reports(cfg),
        Suite::ClosedForm => closed_form_reports(),
        Suite::Errata => errata_report(),
        Suite::Default => {
            let mut out = supermartingale_reports(cfg)?;
            out.extend(pde_reports()?);
            out.extend(measure_change_reports(cfg)?);
            out.extend(closed_form_reports()?);
            out.extend(errata_report()?);
            Ok(out)
        }
    }
}
