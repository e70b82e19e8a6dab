use pricing_kernel::option::{expquad_option_price, lrb_option_price_generic, quad_option_price};
use pricing_kernel::process::simulate_paths;
use pricing_kernel::verification::{run_suite, summary_table, CheckReport, Suite, SuiteConfig};
use pricing_kernel::OptionSpec;

use crate::config::{Model, RunConfig};
use crate::output::{Cell, Table};
use crate::CliError;

/// Half-width of the generic pricer's bracket, in units of `sqrt(t - s)`.
const BRACKET_SDS: f64 = 12.0;
/// Largest exponent `z^2 / (2 (U - t))` reached inside a bracket.
const EXPONENT_LIMIT: f64 = 600.0;

pub fn price_bond(cfg: &RunConfig) -> Result<Table, CliError> {
    let t = cfg.require_t()?;
    let maturities = cfg.maturity_grid()?;
    let ells = cfg.ells_or_zero();
    let mut table = Table::new(vec!["t", "T", "L", "price"]);
    for &maturity in &maturities {
        cfg.check_times(t, t, maturity)?;
        for &ell in &ells {
            let p = cfg.model.bond_price(t, maturity, ell)?;
            table.push(vec![Cell::Num(t), Cell::Num(maturity), Cell::Num(ell), Cell::Num(p)]);
        }
    }
    Ok(table)
}

pub fn yield_curve(cfg: &RunConfig) -> Result<Table, CliError> {
    let t = cfg.require_t()?;
    let grid = cfg.maturity_grid()?;
    let ell = match cfg.ells_or_zero()[..] {
        [ell] => ell,
        _ => return Err(CliError::Config("yield-curve takes a single L".into())),
    };
    for (i, &maturity) in grid.iter().enumerate() {
        if maturity <= t {
            return Err(CliError::Config(format!("maturity {maturity} is not after t={t}")));
        }
        if i > 0 && maturity <= grid[i - 1] {
            return Err(CliError::Config(format!("maturity grid not strictly increasing at index {i}")));
        }
        cfg.check_times(t, t, maturity)?;
    }
    let mut table = Table::new(vec!["T", "price", "yield"]);
    for &maturity in &grid {
        let p = cfg.model.bond_price(t, maturity, ell)?;
        table.push(vec![Cell::Num(maturity), Cell::Num(p), Cell::Num(-p.ln() / (maturity - t))]);
    }
    Ok(table)
}

fn option_specs(cfg: &RunConfig) -> Result<Vec<OptionSpec>, CliError> {
    if !cfg.options.is_empty() {
        return Ok(cfg.options.clone());
    }
    let t = cfg.require_t()?;
    let s = cfg.s.unwrap_or(0.0);
    let maturity = match cfg.maturities[..] {
        [m] => m,
        [] => return Err(CliError::Config("missing --T".into())),
        _ => return Err(CliError::Config("price-option takes a single T".into())),
    };
    let ell = match cfg.ells_or_zero()[..] {
        [ell] => ell,
        _ => return Err(CliError::Config("price-option takes a single L".into())),
    };
    if cfg.strikes.is_empty() {
        return Err(CliError::Config("missing --K".into()));
    }
    Ok(cfg.strikes.iter().map(|&k| OptionSpec::new(s, t, maturity, k, ell)).collect())
}

fn generic_label(o: &OptionSpec) -> String {
    if o.is_immediate() { "intrinsic" } else { "generic" }.to_string()
}

/// Integration range for the generic pricers. The kernel-weighted density
/// of `L_t` can be as wide as the free increment, so the half-width scales
/// with `sqrt(t - s)`; for the exponential-quadratic family it is capped
/// where `exp(z^2 / (2 (U - t)))` would overflow.
fn bracket(model: &Model, o: &OptionSpec) -> Result<(f64, f64), CliError> {
    if o.is_immediate() {
        return Ok((o.l_s - 1.0, o.l_s + 1.0));
    }
    let law = model.process().bridge_conditional_law(o.s, o.t, o.l_s)?;
    let mut half = BRACKET_SDS * (o.t - o.s).sqrt() + (o.l_s - law.mean).abs();
    if let Model::Expquad(_) = model {
        half = half.min((2.0 * EXPONENT_LIMIT * (model.horizon() - o.t)).sqrt());
    }
    Ok((law.mean - half, law.mean + half))
}

pub fn price_option(cfg: &RunConfig) -> Result<Table, CliError> {
    let specs = option_specs(cfg)?;
    let mut table = Table::new(vec!["s", "t", "T", "K", "price", "case_label"]);
    for o in specs {
        cfg.check_times(o.s, o.t, o.maturity)?;
        if !(o.strike > 0.0 && o.strike.is_finite()) {
            return Err(CliError::Config(format!("strike must be > 0, got {}", o.strike)));
        }
        let (price, label) = match &cfg.model {
            Model::Quadratic(m) => {
                let q = quad_option_price(m, &o)?;
                (q.price, q.case.label().to_string())
            }
            Model::Expquad(m) => {
                let q = expquad_option_price(m, &o, bracket(&cfg.model, &o)?)?;
                (q.price, generic_label(&o))
            }
            Model::Kernel(m) => {
                let q = lrb_option_price_generic(m, &o, bracket(&cfg.model, &o)?)?;
                (q.price, generic_label(&o))
            }
        };
        table.push(vec![
            Cell::Num(o.s),
            Cell::Num(o.t),
            Cell::Num(o.maturity),
            Cell::Num(o.strike),
            Cell::Num(price),
            Cell::Text(label),
        ]);
    }
    Ok(table)
}

pub fn simulate(cfg: &RunConfig) -> Result<Table, CliError> {
    let grid = cfg.grid.clone().ok_or_else(|| CliError::Config("missing --grid".into()))?;
    if cfg.paths == 0 {
        return Err(CliError::Config("--paths must be >= 1".into()));
    }
    let paths = simulate_paths(cfg.model.process(), &grid, cfg.paths, cfg.measure, cfg.seed)?;
    let mut table = Table::new(vec!["path_id", "time", "value"]);
    for p in paths {
        for (&time, &value) in p.times.iter().zip(&p.values) {
            table.push(vec![Cell::Int(p.path_index), Cell::Num(time), Cell::Num(value)]);
        }
    }
    Ok(table)
}

/// Runs the named suite. The caller maps any failing report to exit 1.
pub fn verify(cfg: &RunConfig) -> Result<Vec<CheckReport>, CliError> {
    let suite: Suite = cfg.suite.parse().map_err(|e: pricing_kernel::Error| CliError::Config(e.to_string()))?;
    let suite_cfg = SuiteConfig {
        model: cfg.explicit_model.then(|| cfg.model.kernel_model()),
        seed: cfg.seed,
        ..SuiteConfig::default()
    };
    let reports = run_suite(suite, &suite_cfg)?;
    eprint!("{}", summary_table(&reports));
    Ok(reports)
}
