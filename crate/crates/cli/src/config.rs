use std::path::PathBuf;

use pricing_kernel::numerics::QuadratureConfig;
use pricing_kernel::{
    ClosedFormTag, DecayFunction, ExpQuadraticModel, G1Spec, InformationModel, KernelMeasure, KernelModel, Measure,
    OptionSpec, PriorLaw, QuadraticModel, TerminalFunctionSpec, WeightFunctionSpec,
};
use serde::Deserialize;

use crate::args::Overrides;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Quadratic,
    Expquad,
    /// A general kernel model given by terminal and weight functions.
    Kernel,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Model section of the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: Family,
    pub sigma: Option<f64>,
    #[serde(rename = "U")]
    pub horizon: Option<f64>,
    pub prior: Option<PriorLaw>,
    pub eta: Option<f64>,
    pub g0: Option<DecayFunction>,
    pub g1: Option<G1Spec>,
    pub terminal: Option<TerminalFunctionSpec>,
    pub weight: Option<WeightFunctionSpec>,
    pub closed_form: Option<ClosedFormTag>,
    pub measure: Option<KernelMeasure>,
}

impl ModelConfig {
    fn new(family: Family) -> Self {
        Self {
            family,
            sigma: None,
            horizon: None,
            prior: None,
            eta: None,
            g0: None,
            g1: None,
            terminal: None,
            weight: None,
            closed_form: None,
            measure: None,
        }
    }
}

/// A number or a list of numbers.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Values {
    One(f64),
    Many(Vec<f64>),
}

impl Values {
    fn into_vec(self) -> Vec<f64> {
        match self {
            Values::One(v) => vec![v],
            Values::Many(v) => v,
        }
    }
}

/// A grid given as a list of times or a `start:stop:n` / comma-list string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    List(Vec<f64>),
    Spec(String),
}

/// Contents of `--config`. Every field is optional; flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelConfig>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    #[serde(rename = "T")]
    pub maturity: Option<Values>,
    #[serde(rename = "K")]
    pub strike: Option<Values>,
    #[serde(rename = "L")]
    pub ell: Option<Values>,
    pub grid: Option<GridConfig>,
    pub options: Option<Vec<OptionSpec>>,
    pub paths: Option<usize>,
    pub seed: Option<u64>,
    pub measure: Option<Measure>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
    pub quadrature: Option<QuadratureConfig>,
}

/// The model after defaults and overrides.
#[derive(Debug, Clone)]
pub enum Model {
    Quadratic(QuadraticModel),
    Expquad(ExpQuadraticModel),
    Kernel(KernelModel),
}

impl Model {
    pub fn horizon(&self) -> f64 {
        self.process().horizon
    }

    pub fn process(&self) -> &InformationModel {
        match self {
            Model::Quadratic(m) => &m.process,
            Model::Expquad(m) => &m.process,
            Model::Kernel(m) => &m.process,
        }
    }

    pub fn kernel_model(&self) -> KernelModel {
        match self {
            Model::Quadratic(m) => m.kernel_model(),
            Model::Expquad(m) => m.kernel_model(),
            Model::Kernel(m) => m.clone(),
        }
    }

    pub fn bond_price(&self, t: f64, maturity: f64, x: f64) -> pricing_kernel::Result<f64> {
        match self {
            Model::Quadratic(m) => m.bond_price(t, maturity, x),
            Model::Expquad(m) => m.bond_price(t, maturity, x),
            Model::Kernel(m) => m.price_bond(t, maturity, x),
        }
    }
}

/// Config file merged with command-line overrides.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Model,
    /// Whether a model was supplied at all, as opposed to the shipped default.
    pub explicit_model: bool,
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub maturities: Vec<f64>,
    pub strikes: Vec<f64>,
    pub ells: Vec<f64>,
    pub options: Vec<OptionSpec>,
    pub grid: Option<Vec<f64>>,
    pub paths: usize,
    pub seed: u64,
    pub measure: Measure,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub suite: String,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses `start:stop:n` (inclusive linspace) or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(config_error(format!("grid '{spec}' is not start:stop:n")));
        }
        let start = parse_number(parts[0])?;
        let stop = parse_number(parts[1])?;
        let n: usize = parts[2].trim().parse().map_err(|_| config_error(format!("bad grid size '{}'", parts[2])))?;
        return match n {
            0 => Err(config_error("grid size must be >= 1")),
            1 => Ok(vec![start]),
            _ => Ok((0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect()),
        };
    }
    parse_list(spec)
}

pub fn parse_list(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',').filter(|p| !p.trim().is_empty()).map(parse_number).collect()
}

fn parse_number(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| config_error(format!("'{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(config_error(format!("'{s}' is not finite")));
    }
    Ok(v)
}

fn build_model(cfg: ModelConfig, quadrature: Option<QuadratureConfig>) -> Result<Model, CliError> {
    let sigma = cfg.sigma.unwrap_or(1.0);
    let horizon = cfg.horizon.unwrap_or(10.0);
    let prior = cfg.prior.unwrap_or_else(|| PriorLaw::equal_atoms(&[-0.1, 0.1]));
    let process = InformationModel::new(sigma, horizon, prior)?;
    let model = match cfg.family {
        Family::Quadratic => Model::Quadratic(QuadraticModel::new(process)?),
        Family::Expquad => Model::Expquad(ExpQuadraticModel::new(
            process,
            cfg.eta.unwrap_or(1.0),
            cfg.g0.unwrap_or_else(|| DecayFunction::exponential(1.0)),
            cfg.g1.unwrap_or_else(G1Spec::special),
        )?),
        Family::Kernel => {
            let terminal = cfg.terminal.ok_or_else(|| config_error("kernel model needs 'terminal'"))?;
            let weight = cfg.weight.ok_or_else(|| config_error("kernel model needs 'weight'"))?;
            let mut m = KernelModel::new(process, terminal, weight, cfg.closed_form)?;
            if let Some(measure) = cfg.measure {
                m = m.with_measure(measure);
            }
            if let Some(q) = quadrature {
                m = m.with_quadrature(q);
            }
            Model::Kernel(m)
        }
    };
    Ok(model)
}

impl RunConfig {
    pub fn load(file: Option<&std::path::Path>, o: &Overrides) -> Result<Self, CliError> {
        let fc: FileConfig = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };

        let explicit_model = fc.model.is_some() || o.model.is_some();
        let mut mc = match (fc.model, o.model) {
            (Some(m), Some(f)) if m.family != f => ModelConfig::new(f),
            (Some(m), _) => m,
            (None, f) => ModelConfig::new(f.unwrap_or(Family::Quadratic)),
        };
        if o.sigma.is_some() {
            mc.sigma = o.sigma;
        }
        if o.horizon.is_some() {
            mc.horizon = o.horizon;
        }
        if o.eta.is_some() {
            mc.eta = o.eta;
        }
        if let Some(p) = &o.prior {
            mc.prior = Some(serde_json::from_str(p).map_err(|e| config_error(format!("--prior: {e}")))?);
        }
        let model = build_model(mc, fc.quadrature)?;

        let list = |flag: &Option<String>, file: Option<Values>| -> Result<Vec<f64>, CliError> {
            match flag {
                Some(s) => parse_list(s),
                None => Ok(file.map(Values::into_vec).unwrap_or_default()),
            }
        };
        let grid = match (&o.grid, fc.grid) {
            (Some(s), _) => Some(parse_grid(s)?),
            (None, Some(GridConfig::Spec(s))) => Some(parse_grid(&s)?),
            (None, Some(GridConfig::List(v))) => Some(v),
            (None, None) => None,
        };

        Ok(Self {
            model,
            explicit_model,
            s: o.s.or(fc.s),
            t: o.t.or(fc.t),
            maturities: list(&o.maturity, fc.maturity)?,
            strikes: list(&o.strike, fc.strike)?,
            ells: list(&o.ell, fc.ell)?,
            options: fc.options.unwrap_or_default(),
            grid,
            paths: o.paths.or(fc.paths).unwrap_or(1),
            seed: o.seed.or(fc.seed).unwrap_or(0),
            measure: o.measure.or(fc.measure).unwrap_or(Measure::P),
            format: o.format.or(fc.format).unwrap_or_default(),
            out: o.out.clone().or(fc.out),
            suite: o.suite.clone().or(fc.suite).unwrap_or_else(|| "default".into()),
        })
    }

    pub fn require_t(&self) -> Result<f64, CliError> {
        self.t.ok_or_else(|| config_error("missing --t"))
    }

    /// `L` values, defaulting to `[0]`.
    pub fn ells_or_zero(&self) -> Vec<f64> {
        if self.ells.is_empty() {
            vec![0.0]
        } else {
            self.ells.clone()
        }
    }

    /// Maturities from `--T`, else from `--grid`.
    pub fn maturity_grid(&self) -> Result<Vec<f64>, CliError> {
        if !self.maturities.is_empty() {
            return Ok(self.maturities.clone());
        }
        self.grid.clone().ok_or_else(|| config_error("missing --T or --grid"))
    }

    /// Checks `0 <= s <= t <= T < U` for every referenced time.
    pub fn check_times(&self, s: f64, t: f64, maturity: f64) -> Result<(), CliError> {
        let horizon = self.model.horizon();
        let last = horizon * (1.0 - pricing_kernel::process::HORIZON_GUARD);
        if !(0.0 <= s && s <= t && t <= maturity && maturity <= last) {
            return Err(config_error(format!(
                "need 0 <= s <= t <= T < U, got s={s} t={t} T={maturity} U={horizon}"
            )));
        }
        Ok(())
    }
}
