use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::{CheckReport, Worst};
use super::supermartingale::conditional_mean;
use crate::closed_form::{DecayFunction, ExpQuadraticModel, G1Spec, QuadraticModel};
use crate::error::Result;
use crate::kernel::KernelModel;
use crate::process::{bridge_conditional_law, InformationModel, PriorLaw};

/// Tolerance for closed forms against quadrature, relative.
const REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceGrid {
    pub t: Vec<f64>,
    pub maturities: Vec<f64>,
    pub x: Vec<f64>,
}

impl EquivalenceGrid {
    /// 10 valuation times, 10 maturities and 7 information values.
    pub fn standard(horizon: f64) -> Self {
        Self {
            t: (0..10).map(|i| horizon * 0.09 * i as f64).collect(),
            maturities: (0..10).map(|i| horizon * (0.05 + 0.09 * i as f64)).collect(),
            x: vec![-3.0, -2.0, -1.0, 0.0, 0.5, 1.5, 3.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormCatalogue {
    pub quadratic: Vec<QuadraticModel>,
    pub expquad: Vec<ExpQuadraticModel>,
}

impl ClosedFormCatalogue {
    /// The shipped models at `U = 10`.
    pub fn standard() -> Self {
        let process = InformationModel::new(1.0, 10.0, PriorLaw::equal_atoms(&[-0.1, 0.1])).expect("valid process");
        let expquad = |eta: f64, g1: G1Spec| ExpQuadraticModel {
            process: process.clone(),
            eta,
            g0: DecayFunction::exponential(1.0),
            g1,
        };
        Self {
            quadratic: vec![QuadraticModel { process: process.clone() }],
            expquad: vec![
                expquad(1.0, G1Spec::special()),
                expquad(1.5, G1Spec::special()),
                expquad(1.0, G1Spec::Function(DecayFunction::exponential(0.1))),
            ],
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn untagged(mut m: KernelModel) -> KernelModel {
    m.closed_form = None;
    m
}

fn quadratic_reports(m: &QuadraticModel, grid: &EquivalenceGrid, label: &str) -> Result<Vec<CheckReport>> {
    let engine = untagged(m.kernel_model());
    let started = Instant::now();
    let mut worst = Worst::new();
    let mut n = 0;
    for &t in &grid.t {
        for &x in &grid.x {
            let e = rel(m.f(t, x)?, engine.weighted_heat_kernel_quadrature(t, x)?);
            worst.offer(e, &[("t", t), ("x", x)]);
            n += 1;
        }
    }
    let f_report = CheckReport::new(format!("closed_form.{label}.f"), worst.value, REL_TOL, worst.at, n, started);

    let started = Instant::now();
    let mut worst = Worst::new();
    let mut n = 0;
    for &t in &grid.t {
        for &big_t in grid.maturities.iter().filter(|&&v| v >= t) {
            for &x in &grid.x {
                let e = rel(m.bond_price(t, big_t, x)?, engine.price_bond(t, big_t, x)?);
                worst.offer(e, &[("t", t), ("T", big_t), ("x", x)]);
                n += 1;
            }
        }
    }
    let p_report = CheckReport::new(format!("closed_form.{label}.bond"), worst.value, REL_TOL, worst.at, n, started);
    Ok(vec![f_report, p_report])
}

/// The `(exponential-quadratic F, power w)` kernel against the closed form
/// `eta^-1 (U - t)^(eta + 1/2) exp(x^2 / (2 (U - t)))`, and the printed
/// variant `(eta - 1/2)^-1 (U - t)^eta exp(...)` as an informational report.
pub(crate) fn expsup_reports(m: &ExpQuadraticModel, grid: &EquivalenceGrid, label: &str) -> Result<Vec<CheckReport>> {
    let engine = untagged(m.kernel_model());
    let u = m.horizon();
    let eta = m.eta;
    let started = Instant::now();
    let (mut corrected, mut printed) = (Worst::new(), Worst::new());
    let mut n = 0;
    for &t in &grid.t {
        for &x in &grid.x {
            let q = engine.weighted_heat_kernel_quadrature(t, x)?;
            let e = (0.5 * x * x / (u - t)).exp();
            let c = (u - t).powf(eta + 0.5) * e / eta;
            let p = (u - t).powf(eta) * e / (eta - 0.5);
            corrected.offer(rel(c, q), &[("t", t), ("x", x), ("quadrature", q), ("closed_form", c)]);
            printed.offer(rel(p, q), &[("t", t), ("x", x), ("quadrature", q), ("printed", p)]);
            n += 1;
        }
    }
    Ok(vec![
        CheckReport::new(format!("closed_form.{label}.kernel"), corrected.value, REL_TOL, corrected.at, n, started),
        CheckReport::new(format!("closed_form.{label}.kernel_printed"), printed.value, REL_TOL, printed.at, n, started)
            .informational()
            .with_note("printed constant (eta - 1/2)^-1 (U - t)^eta disagrees with quadrature; the code uses eta^-1 (U - t)^(eta + 1/2)"),
    ])
}

fn expquad_bond_report(m: &ExpQuadraticModel, grid: &EquivalenceGrid, label: &str) -> Result<CheckReport> {
    let started = Instant::now();
    let mut worst = Worst::new();
    let mut n = 0;
    let f = |t: f64, x: f64| m.f_tilde(t, x);
    for &t in &grid.t {
        for &big_t in grid.maturities.iter().filter(|&&v| v > t) {
            for &x in &grid.x {
                let law = bridge_conditional_law(m.horizon(), t, big_t, x)?;
                let num = conditional_mean(&FnKernel { horizon: m.horizon(), f: &f }, big_t, law.mean, law.variance)?;
                let e = rel(m.bond_price(t, big_t, x)?, num / f(t, x)?);
                worst.offer(e, &[("t", t), ("T", big_t), ("x", x)]);
                n += 1;
            }
        }
    }
    Ok(CheckReport::new(format!("closed_form.{label}.bond"), worst.value, REL_TOL, worst.at, n, started))
}

struct FnKernel<'a, F> {
    horizon: f64,
    f: &'a F,
}

impl<F: Fn(f64, f64) -> Result<f64> + Sync> crate::kernel::KernelFunction for FnKernel<'_, F> {
    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn value(&self, t: f64, x: f64) -> Result<f64> {
        (self.f)(t, x)
    }
}

/// Compares every closed form in the catalogue with the quadrature engine.
pub fn check_closed_form_equivalence(
    catalogue: &ClosedFormCatalogue,
    grid: &EquivalenceGrid,
) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (i, m) in catalogue.quadratic.iter().enumerate() {
        out.extend(quadratic_reports(m, grid, &format!("quadratic[{i}]"))?);
    }
    for (i, m) in catalogue.expquad.iter().enumerate() {
        let label = format!("expquad[{i}]");
        out.extend(expsup_reports(m, grid, &label)?);
        out.push(expquad_bond_report(m, grid, &label)?);
    }
    Ok(out)
}
