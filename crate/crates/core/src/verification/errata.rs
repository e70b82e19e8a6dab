//! Quadrature evidence for four misprints: each item pairs the formula the
//! code uses (must pass) with the printed one (informational).

use std::time::Instant;

use super::equivalence::{expsup_reports, EquivalenceGrid};
use super::report::{CheckReport, Worst};
use crate::closed_form::{DecayFunction, ExpQuadraticModel, G1Spec, QuadraticModel};
use crate::error::Result;
use crate::numerics::{self, gaussian_expectation, normal, QuadratureConfig};
use crate::option::gaussian_quadratic_integral;
use crate::process::{bridge_conditional_law, InformationModel, PriorLaw};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn process() -> InformationModel {
    InformationModel::new(1.0, 10.0, PriorLaw::point_mass(0.0)).expect("valid process")
}

/// (a) `E_B[L_{t+u}^2 | L_t = x]` carries the squared ratio
/// `((U - t - u) / (U - t))^2` on `x^2`.
fn second_moment() -> Result<Vec<CheckReport>> {
    let m = QuadraticModel::new(process())?;
    let u_max = m.horizon();
    let started = Instant::now();
    let (mut used, mut printed) = (Worst::new(), Worst::new());
    let mut n = 0;
    for t in [0.0, 2.5, 6.0] {
        for u in [0.5, 1.5, 3.0] {
            for x in [-2.0, 0.7, 1.9] {
                let law = bridge_conditional_law(u_max, t, t + u, x)?;
                let oracle = gaussian_expectation(law.mean, law.variance, 1e-14, |y| y * y)?;
                let a = (u_max - t - u) / (u_max - t);
                used.offer(rel(m.conditional_second_moment(u, t, x)?, oracle), &[("t", t), ("u", u), ("x", x)]);
                printed.offer(rel(u * a + a * x * x, oracle), &[("t", t), ("u", u), ("x", x)]);
                n += 1;
            }
        }
    }
    Ok(vec![
        CheckReport::new("errata.second_moment", used.value, 1e-12, used.at, n, started)
            .with_note("squared ratio on x^2"),
        CheckReport::new("errata.second_moment_printed", printed.value, 1e-12, printed.at, n, started)
            .informational()
            .with_note("printed form without the square"),
    ])
}

/// (b) The bond numerator uses `w(T, u - (T - t))`; the tower property
/// `E_B[f(T, L_T) | L_t = x]` is the oracle.
fn weight_argument() -> Result<Vec<CheckReport>> {
    let mut engine = QuadraticModel::new(process())?.kernel_model();
    engine.closed_form = None;
    let u_max = engine.horizon();
    let started = Instant::now();
    let (mut used, mut printed) = (Worst::new(), Worst::new());
    let mut n = 0;
    for (t, big_t) in [(0.0, 5.0), (2.0, 3.0), (4.0, 8.5)] {
        for x in [-1.0, 0.0, 2.0] {
            let law = bridge_conditional_law(u_max, t, big_t, x)?;
            let oracle = numerics::GaussHermiteRule::cached(64)
                .try_expect(law.mean, law.variance, |y| engine.weighted_heat_kernel_quadrature(big_t, y))?;
            let lag = big_t - t;
            let num = engine.bond_numerator(t, big_t, x)?;
            let bad = engine.bond_numerator_with(t, big_t, x, |u| u - big_t - t)?;
            used.offer(rel(num, oracle), &[("t", t), ("T", big_t), ("x", x), ("lag", lag)]);
            printed.offer(rel(bad, oracle), &[("t", t), ("T", big_t), ("x", x)]);
            n += 1;
        }
    }
    Ok(vec![
        CheckReport::new("errata.bond_weight_argument", used.value, 1e-8, used.at, n, started)
            .with_note("w(T, u - (T - t))"),
        CheckReport::new("errata.bond_weight_argument_printed", printed.value, 1e-8, printed.at, n, started)
            .informational()
            .with_note("printed w(T, u - T - t)"),
    ])
}

fn positive_part_by_quadrature(a: f64, b: f64, c: f64, roots: (f64, f64)) -> Result<f64> {
    let cfg = QuadratureConfig::tight();
    let g = |y: f64| Ok(((c * y + b) * y + a).max(0.0) * normal::pdf(y));
    let edges = [-40.0, roots.0, roots.1, 40.0];
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += numerics::integrate(g, w[0], w[1], &cfg)?;
    }
    Ok(total)
}

fn printed_case_two(a: f64, b: f64, c: f64) -> f64 {
    let d = (b * b - 4.0 * a * c).sqrt();
    let (y_plus, y_minus) = ((-b + d) / (2.0 * c), (-b - d) / (2.0 * c));
    let gauss = |y: f64| (-0.5 * y * y).exp();
    if c < 0.0 {
        (a + b) * (normal::cdf(y_plus) - normal::cdf(y_minus)) + (b + c * y_minus) * gauss(y_minus)
            - (b + c * y_plus) * gauss(y_plus)
    } else {
        (a + c) * (normal::cdf(y_minus) + normal::cdf(y_plus)) - (b + c * y_minus) * normal::pdf(y_minus)
            + (b + c * y_plus) * normal::pdf(y_plus)
    }
}

/// (c) The case with two real roots, through the identity for
/// `∫ (c y^2 + b y + a) φ(y) dy` between the roots.
fn case_two() -> Result<Vec<CheckReport>> {
    let started = Instant::now();
    let (mut used, mut printed) = (Worst::new(), Worst::new());
    // worked-example coefficients, a shifted c < 0 case and two c > 0 cases
    let cases: [(f64, f64, f64); 4] = [
        (13.602_083_333_333_334, 0.0, -1.213_750),
        (2.0, 0.8, -0.5),
        (-1.0, 0.5, 2.0),
        (-0.3, -1.1, 0.4),
    ];
    for &(a, b, c) in &cases {
        let d = (b * b - 4.0 * a * c).sqrt();
        let (r1, r2) = ((-b - d) / (2.0 * c), (-b + d) / (2.0 * c));
        let roots = (r1.min(r2), r1.max(r2));
        let oracle = positive_part_by_quadrature(a, b, c, roots)?;
        let inner = gaussian_quadratic_integral(a, b, c, roots.0, roots.1);
        let value = if c < 0.0 { inner } else { a + c - inner };
        used.offer((value - oracle).abs(), &[("a", a), ("b", b), ("c", c), ("oracle", oracle)]);
        printed.offer((printed_case_two(a, b, c) - oracle).abs(), &[("a", a), ("b", b), ("c", c), ("oracle", oracle)]);
    }
    let n = cases.len() as u64;
    Ok(vec![
        CheckReport::new("errata.case_two_identity", used.value, 1e-10, used.at, n, started)
            .with_note("(a + c)[N(hi) - N(lo)] + (b + c lo) φ(lo) - (b + c hi) φ(hi)"),
        CheckReport::new("errata.case_two_printed", printed.value, 1e-10, printed.at, n, started)
            .informational()
            .with_note("printed (a + b) and missing 1/sqrt(2 pi) for c < 0; N(y+) for 1 - N(y+) for c > 0"),
    ])
}

/// (d) The exponential-quadratic weighted heat kernel constant.
fn expsup() -> Result<Vec<CheckReport>> {
    let grid = EquivalenceGrid { t: vec![0.0, 3.0, 7.0], maturities: vec![], x: vec![0.0, 1.0, -2.5] };
    let mut out = Vec::new();
    for eta in [1.0, 1.75] {
        let m = ExpQuadraticModel::new(process(), eta, DecayFunction::exponential(1.0), G1Spec::special())?;
        for mut r in expsup_reports(&m, &grid, "")? {
            r.check_name = r.check_name.replace("closed_form..kernel", &format!("errata.expsup[eta={eta}]"));
            out.push(r);
        }
    }
    Ok(out)
}

/// The four errata items, each as a passing report for the implemented
/// formula and an informational one for the printed formula.
pub fn errata_report() -> Result<Vec<CheckReport>> {
    let mut out = second_moment()?;
    out.extend(weight_argument()?);
    out.extend(case_two()?);
    out.extend(expsup()?);
    Ok(out)
}
