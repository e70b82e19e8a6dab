//! Exact path simulation of the information process.
//!
//! Each path draws from its own ChaCha8 stream selected by
//! `(seed, path index)`, so output is identical for any thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::information::{bridge_conditional_law, InformationModel};
use crate::error::{domain, Result};

/// Probability measure under which paths are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    /// Real-world measure: `L_t = sigma t X + beta_t`.
    P,
    /// Bridge measure: `L` is a standard Brownian bridge pinned at 0 and U.
    B,
}

impl std::str::FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "P" | "p" => Ok(Measure::P),
            "B" | "b" => Ok(Measure::B),
            other => Err(format!("unknown measure '{other}', expected P or B")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub measure: Measure,
    pub seed: u64,
    pub path_index: u64,
}

/// RNG stream for one path.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

/// Checks that `grid` is non-empty, strictly increasing and inside `[0, U)`.
pub fn validate_grid(model: &InformationModel, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(domain("time grid is empty"));
    }
    for (i, &t) in grid.iter().enumerate() {
        model.check_time(t)?;
        if i > 0 && t <= grid[i - 1] {
            return Err(domain(format!("time grid not strictly increasing at index {i}")));
        }
    }
    Ok(())
}

/// Writes one path into `out` (same length as `grid`). The grid must
/// already be validated.
pub fn fill_path(
    model: &InformationModel,
    grid: &[f64],
    measure: Measure,
    rng: &mut ChaCha8Rng,
    out: &mut [f64],
) -> Result<()> {
    let signal = match measure {
        Measure::P => model.sigma * model.prior.sample(rng),
        Measure::B => 0.0,
    };
    // sequential bridge conditioning from (0, 0)
    let (mut s, mut bridge) = (0.0, 0.0);
    for (slot, &t) in out.iter_mut().zip(grid) {
        let law = bridge_conditional_law(model.horizon, s, t, bridge)?;
        let z: f64 = StandardNormal.sample(rng);
        bridge = law.mean + law.sd() * z;
        s = t;
        *slot = signal * t + bridge;
    }
    Ok(())
}

pub fn simulate_path(
    model: &InformationModel,
    grid: &[f64],
    measure: Measure,
    seed: u64,
    path_index: u64,
) -> Result<PathSample> {
    validate_grid(model, grid)?;
    let mut values = vec![0.0; grid.len()];
    fill_path(model, grid, measure, &mut path_rng(seed, path_index), &mut values)?;
    Ok(PathSample { times: grid.to_vec(), values, measure, seed, path_index })
}

/// Simulates `n_paths` paths in parallel; path `i` uses stream `i`.
pub fn simulate_paths(
    model: &InformationModel,
    grid: &[f64],
    n_paths: usize,
    measure: Measure,
    seed: u64,
) -> Result<Vec<PathSample>> {
    if n_paths == 0 {
        return Err(domain("n_paths must be >= 1"));
    }
    model.validate()?;
    validate_grid(model, grid)?;
    (0..n_paths as u64)
        .into_par_iter()
        .map(|i| simulate_path(model, grid, measure, seed, i))
        .collect()
}

/// Values of every path at each grid time, as `[time][path]`. Avoids
/// holding per-path metadata for large ensembles.
pub fn simulate_matrix(
    model: &InformationModel,
    grid: &[f64],
    n_paths: usize,
    measure: Measure,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let paths = simulate_paths(model, grid, n_paths, measure, seed)?;
    let mut by_time = vec![Vec::with_capacity(n_paths); grid.len()];
    for p in paths {
        for (k, v) in p.values.into_iter().enumerate() {
            by_time[k].push(v);
        }
    }
    Ok(by_time)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::PriorLaw;

    fn model() -> InformationModel {
        InformationModel::new(1.0, 10.0, PriorLaw::point_mass(1.0)).unwrap()
    }

    #[test]
    fn grid_validation() {
        let m = model();
        assert!(simulate_path(&m, &[], Measure::B, 0, 0).is_err());
        assert!(simulate_path(&m, &[1.0, 1.0], Measure::B, 0, 0).is_err());
        assert!(simulate_path(&m, &[1.0, 10.0], Measure::B, 0, 0).is_err());
        assert!(simulate_paths(&m, &[1.0], 0, Measure::B, 0).is_err());
    }

    #[test]
    fn starts_at_zero() {
        let m = model();
        for p in simulate_paths(&m, &[0.0], 50, Measure::P, 3).unwrap() {
            assert_eq!(p.values, vec![0.0]);
        }
    }

    #[test]
    fn same_seed_same_paths() {
        let m = model();
        let a = simulate_paths(&m, &[1.0, 2.0, 7.5], 64, Measure::P, 11).unwrap();
        let b = simulate_paths(&m, &[1.0, 2.0, 7.5], 64, Measure::P, 11).unwrap();
        assert_eq!(a, b);
        let c = simulate_paths(&m, &[1.0, 2.0, 7.5], 64, Measure::P, 12).unwrap();
        assert_ne!(a[0].values, c[0].values);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let m = model();
        let grid = [0.5, 4.0, 9.0];
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = pool1.install(|| simulate_paths(&m, &grid, 200, Measure::B, 5).unwrap());
        let b = pool4.install(|| simulate_paths(&m, &grid, 200, Measure::B, 5).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn path_index_selects_stream() {
        let m = model();
        let all = simulate_paths(&m, &[2.0], 10, Measure::B, 9).unwrap();
        let single = simulate_path(&m, &[2.0], Measure::B, 9, 7).unwrap();
        assert_eq!(all[7], single);
    }
}
