use pricing_kernel::numerics::normal;
use pricing_kernel::process::simulation::simulate_matrix;
use pricing_kernel::process::{lrb_transition_density, simulate_path, simulate_paths, LrbDensitySpec};
use pricing_kernel::{InformationModel, Measure, PriorLaw};

fn two_atoms() -> InformationModel {
    InformationModel::new(1.0, 10.0, PriorLaw::equal_atoms(&[0.0, 1.0])).unwrap()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v)
}

#[test]
fn bridge_law_examples() {
    let m = two_atoms();
    let law = m.bridge_conditional_law(3.0, 3.0, 1.7).unwrap();
    assert_eq!((law.mean, law.variance), (1.7, 0.0));
    let law = m.bridge_conditional_law(0.0, 5.0, 0.0).unwrap();
    assert_eq!((law.mean, law.variance), (0.0, 2.5));
    assert!((law.sd() - 1.5811).abs() < 1e-4);
    let law = m.bridge_conditional_law(2.0, 6.0, 1.0).unwrap();
    assert!((law.mean - 0.5).abs() < 1e-15 && (law.variance - 2.0).abs() < 1e-15);
}

#[test]
fn bridge_law_from_restricted_paths() {
    // draw bridges on [0, 2, 6], keep those with L_2 near 1, look at L_6
    let m = two_atoms();
    let rows = simulate_matrix(&m, &[2.0, 6.0], 1_000_000, Measure::B, 11).unwrap();
    let band = 0.02;
    let kept: Vec<f64> = rows[0]
        .iter()
        .zip(&rows[1])
        .filter(|(x, _)| (*x - 1.0).abs() < band)
        .map(|(x, y)| y - 0.5 * (x - 1.0))
        .collect();
    let (mean, var) = mean_var(&kept);
    let se = (var / kept.len() as f64).sqrt();
    assert!(kept.len() > 5_000);
    assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean} se {se}");
    let var_se = 2.0 * (2.0f64 / kept.len() as f64).sqrt();
    assert!((var - 2.0).abs() < 3.0 * var_se, "var {var}");
}

#[test]
fn bridge_moments_and_covariance() {
    let m = two_atoms();
    let (s, t, u) = (3.0, 5.0, 10.0);
    let n = 200_000;
    let rows = simulate_matrix(&m, &[s, t], n, Measure::B, 3).unwrap();
    let (mean, var) = mean_var(&rows[1]);
    let v_true = t * (u - t) / u;
    assert!(mean.abs() < 3.0 * (v_true / n as f64).sqrt());
    assert!((var - v_true).abs() < 3.0 * v_true * (2.0 / n as f64).sqrt(), "var {var}");

    let prod: Vec<f64> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a * b).collect();
    let (cov, pv) = mean_var(&prod);
    let c_true = s * (u - t) / u;
    assert!((cov - c_true).abs() < 3.0 * (pv / n as f64).sqrt(), "cov {cov} vs {c_true}");
}

#[test]
fn signal_mean_under_p() {
    let m = InformationModel::new(1.0, 10.0, PriorLaw::point_mass(1.0)).unwrap();
    let n = 100_000;
    let rows = simulate_matrix(&m, &[5.0], n, Measure::P, 5).unwrap();
    let (mean, _) = mean_var(&rows[0]);
    assert!((mean - 5.0).abs() < 3.0 * (2.5 / n as f64).sqrt(), "{mean}");
}

#[test]
fn zero_grid_gives_zero() {
    let m = two_atoms();
    for p in simulate_paths(&m, &[0.0], 50, Measure::P, 1).unwrap() {
        assert_eq!(p.values, vec![0.0]);
    }
}

#[test]
fn paths_do_not_depend_on_ensemble_size() {
    let m = two_atoms();
    let grid = [1.0, 4.0, 9.5];
    let many = simulate_paths(&m, &grid, 64, Measure::P, 42).unwrap();
    let again = simulate_paths(&m, &grid, 64, Measure::P, 42).unwrap();
    assert_eq!(many, again);
    let one = simulate_path(&m, &grid, Measure::P, 42, 17).unwrap();
    assert_eq!(one.values, many[17].values);
    let other = simulate_paths(&m, &grid, 64, Measure::P, 43).unwrap();
    assert_ne!(many[0].values, other[0].values);
}

/// Bayes posterior of `X` from the Gaussian likelihood of `L_t`.
fn bayes(m: &InformationModel, atoms: &[(f64, f64)], t: f64, ell: f64) -> (f64, f64) {
    let u = m.horizon;
    let v = t * (u - t) / u;
    let lik: Vec<f64> = atoms.iter().map(|&(x, w)| w * normal::density(ell, m.sigma * t * x, v)).collect();
    let p_density: f64 = lik.iter().sum();
    let mean = atoms.iter().zip(&lik).map(|((x, _), l)| x * l).sum::<f64>() / p_density;
    let bridge_density = normal::density(ell, 0.0, v);
    (mean, bridge_density / p_density)
}

#[test]
fn posterior_and_measure_change_against_bayes() {
    let m = two_atoms();
    let atoms = [(0.0, 0.5), (1.0, 0.5)];
    let (mean, big_m) = bayes(&m, &atoms, 5.0, 2.0);
    assert!((m.posterior_mean(5.0, 2.0).unwrap() - mean).abs() < 1e-13);
    assert!((m.measure_change_martingale(5.0, 2.0).unwrap() - big_m).abs() < 1e-12);
    assert!((mean - 0.26894).abs() < 1e-5);
    assert!((big_m - 1.46212).abs() < 1e-5);

    let skew = InformationModel::new(0.7, 4.0, PriorLaw::Discrete { atoms: vec![(-1.0, 0.2), (0.5, 0.3), (2.0, 0.5)] })
        .unwrap();
    let atoms = [(-1.0, 0.2), (0.5, 0.3), (2.0, 0.5)];
    for (t, ell) in [(0.5, -1.0), (2.0, 0.3), (3.5, 4.0)] {
        let (mean, big_m) = bayes(&skew, &atoms, t, ell);
        assert!((skew.posterior_mean(t, ell).unwrap() - mean).abs() < 1e-12);
        assert!((skew.measure_change_martingale(t, ell).unwrap() / big_m - 1.0).abs() < 1e-12);
    }
}

#[test]
fn posterior_by_kernel_regression() {
    let m = two_atoms();
    let n = 400_000;
    let mut num = 0.0;
    let mut den = 0.0;
    for p in simulate_paths(&m, &[5.0], n, Measure::P, 9).unwrap() {
        let k = (-0.5 * ((p.values[0] - 2.0) / 0.05).powi(2)).exp();
        // X is the first draw on each path's stream
        num += k * signal_of(&m, p.path_index);
        den += k;
    }
    assert!((num / den - 0.26894).abs() < 2e-2, "{}", num / den);
}

fn signal_of(m: &InformationModel, index: u64) -> f64 {
    use pricing_kernel::process::simulation::path_rng;
    m.prior.sample(&mut path_rng(9, index))
}

#[test]
fn trivial_posterior_cases() {
    let m = two_atoms();
    assert_eq!(m.posterior_mean(0.0, 3.0).unwrap(), 0.5);
    assert!((m.measure_change_martingale(0.0, -2.0).unwrap() - 1.0).abs() < 1e-15);
    let pm = InformationModel::new(1.0, 10.0, PriorLaw::point_mass(0.3)).unwrap();
    assert_eq!(pm.posterior_mean(6.0, -4.0).unwrap(), 0.3);
    let zero = InformationModel::new(1.0, 10.0, PriorLaw::point_mass(0.0)).unwrap();
    assert_eq!(zero.measure_change_martingale(7.0, 2.5).unwrap(), 1.0);
}

#[test]
fn horizon_guard() {
    let m = two_atoms();
    assert!(m.posterior_mean(10.0, 0.0).is_err());
    assert!(m.bridge_conditional_law(0.0, -1.0, 0.0).is_err());
    assert!(m.bridge_conditional_law(4.0, 3.0, 0.0).is_err());
    assert!(m.check_time(m.last_time()).is_ok());
}

#[test]
fn lrb_point_mass_is_bridge_density() {
    let spec = LrbDensitySpec::brownian();
    let z = 1.5;
    let u = 10.0;
    for (s, t, x, y) in [(0.0, 5.0, 0.0, 1.0), (2.0, 7.0, 0.4, -0.3), (6.0, 9.9, 2.0, 1.6)] {
        let d = lrb_transition_density(&spec, &PriorLaw::point_mass(z), u, s, t, x, y).unwrap();
        // bridge from (s, x) to (U, z)
        let mean = x + (z - x) * (t - s) / (u - s);
        let var = (t - s) * (u - t) / (u - s);
        let oracle = normal::density(y, mean, var);
        assert!((d - oracle).abs() < 1e-10, "{d} vs {oracle}");
    }
}

#[test]
fn lrb_gaussian_terminal_law_matches_joint_gaussian() {
    // L_t = sigma t X + beta_t with X ~ N(m, v) is jointly Gaussian
    let (sigma, u, m0, v0) = (0.8, 10.0, 0.3, 1.7);
    let model = InformationModel::new(sigma, u, PriorLaw::Gaussian { mean: m0, variance: v0 }).unwrap();
    let nu = model.terminal_law();
    let spec = LrbDensitySpec::brownian();
    let mean = |t: f64| sigma * t * m0;
    let cov = |s: f64, t: f64| sigma * sigma * s * t * v0 + s * (u - t) / u;
    for (s, t, x, y) in [(1.0, 4.0, 0.5, 1.2), (3.0, 8.0, -1.0, 0.0), (0.0, 2.0, 0.0, 0.7)] {
        let got = lrb_transition_density(&spec, &nu, u, s, t, x, y).unwrap();
        let oracle = if s == 0.0 {
            normal::density(y, mean(t), cov(t, t))
        } else {
            let k = cov(s, t) / cov(s, s);
            normal::density(y, mean(t) + k * (x - mean(s)), cov(t, t) - k * cov(s, t))
        };
        assert!((got / oracle - 1.0).abs() < 1e-9, "{got} vs {oracle}");
    }
}

#[test]
fn lrb_density_integrates_to_one() {
    let spec = LrbDensitySpec::brownian();
    let nu = two_atoms().terminal_law();
    let cfg = pricing_kernel::numerics::QuadratureConfig::tight();
    for (s, t, x) in [(0.0, 5.0, 0.0), (2.0, 9.0, 1.3)] {
        let mass = pricing_kernel::numerics::integrate_real_line(
            |y| lrb_transition_density(&spec, &nu, 10.0, s, t, x, y),
            x,
            3.0,
            &cfg,
        )
        .unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "{mass}");
    }
}

#[test]
fn measure_change_mean_is_one() {
    let m = two_atoms();
    let grid = [2.0, 5.0, 8.0];
    let n = 100_000;
    let rows = simulate_matrix(&m, &grid, n, Measure::P, 21).unwrap();
    for (k, &t) in grid.iter().enumerate() {
        let ms: Vec<f64> = rows[k].iter().map(|&l| m.measure_change_martingale(t, l).unwrap()).collect();
        let (mean, var) = mean_var(&ms);
        let se = (var / n as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "t={t}: {mean} ± {se}");
    }
}
