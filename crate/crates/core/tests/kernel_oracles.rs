use pricing_kernel::numerics::{integrate_to_endpoint, GaussHermiteRule, QuadratureConfig};
use pricing_kernel::process::simulation::path_rng;
use pricing_kernel::verification::{check_supermartingale, SupermartingaleMethod};
use pricing_kernel::{
    check_weight_validity, ClosedFormTag, InformationModel, KernelModel, PriorLaw, QuadraticModel,
    TerminalFunctionSpec, WeightFunctionSpec,
};
use rand_distr::{Distribution, StandardNormal};

fn process() -> InformationModel {
    InformationModel::new(1.0, 10.0, PriorLaw::equal_atoms(&[-0.1, 0.1])).unwrap()
}

fn quadratic() -> KernelModel {
    KernelModel::new(process(), TerminalFunctionSpec::Quadratic, WeightFunctionSpec::Affine, None).unwrap()
}

fn expquad(eta: f64) -> KernelModel {
    KernelModel::new(process(), TerminalFunctionSpec::ExponentialQuadratic, WeightFunctionSpec::Power { eta }, None)
        .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn propagator_quadratic_example() {
    let p = quadratic().propagator(2.0, 5.0, 0.0).unwrap();
    assert!((p - 1.2).abs() < 1e-14);

    // Monte Carlo over bridge draws of L_7 given L_5 = 0
    let law = process().bridge_conditional_law(5.0, 7.0, 0.0).unwrap();
    let mut rng = path_rng(4, 0);
    let n = 200_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            (law.mean + law.sd() * z).powi(2)
        })
        .collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - p).abs() < 3.0 * (var / n as f64).sqrt(), "{mean}");
}

#[test]
fn propagator_expquad_example() {
    let p = expquad(1.0).propagator(2.0, 5.0, 1.0).unwrap();
    let exact = (5.0f64 / 3.0).sqrt() * 0.1f64.exp();
    assert!(rel(p, exact) < 1e-13);
    assert!((p - 1.4267695).abs() < 1e-7);
    let law = process().bridge_conditional_law(5.0, 7.0, 1.0).unwrap();
    let gh = GaussHermiteRule::new(200).expect(law.mean, law.variance, |y| (y * y / 6.0).exp());
    assert!(rel(p, gh) < 1e-12, "{p} vs {gh}");
}

#[test]
fn propagator_small_lag_limit() {
    let u = 1e-8;
    for (m, t, x) in [(quadratic(), 3.0, 1.3), (expquad(1.2), 6.0, -0.8)] {
        let got = m.propagator(u, t, x).unwrap();
        let at = m.terminal.eval(10.0, t, x);
        assert!(rel(got, at) < 1e-6, "{got} vs {at}");
    }
    let lin = KernelModel::new(
        process(),
        TerminalFunctionSpec::ExponentialLinear { mu: 0.7 },
        WeightFunctionSpec::Affine,
        None,
    )
    .unwrap();
    assert!(rel(lin.propagator(u, 2.0, 0.5).unwrap(), (-0.35f64).exp()) < 1e-6);
}

#[test]
fn propagator_tower_property() {
    let rule = GaussHermiteRule::new(128);
    let m = expquad(1.3);
    let lin = KernelModel::new(
        process(),
        TerminalFunctionSpec::ExponentialLinear { mu: -0.4 },
        WeightFunctionSpec::Affine,
        None,
    )
    .unwrap();
    for model in [quadratic(), m, lin] {
        for (s, t, u, x) in [(0.0, 3.0, 2.0, 0.0), (2.0, 5.0, 3.5, 1.1), (6.0, 8.0, 1.0, -2.0)] {
            let law = process().bridge_conditional_law(s, t, x).unwrap();
            let composed = rule
                .try_expect(law.mean, law.variance, |y| model.propagator(u, t, y))
                .unwrap();
            let direct = model.propagator(u + t - s, s, x).unwrap();
            assert!(rel(composed, direct) < 1e-8, "{:?}: {composed} vs {direct}", model.terminal);
        }
    }
}

#[test]
fn heat_kernel_examples() {
    let m = quadratic();
    assert!(rel(m.weighted_heat_kernel_quadrature(0.0, 0.0).unwrap(), 1000.0 / 12.0) < 1e-9);
    assert!(rel(m.weighted_heat_kernel_quadrature(5.0, 2.0).unwrap(), 125.0 / 12.0 + 25.0) < 1e-9);
    assert!((125.0 / 12.0 + 25.0 - 35.4167f64).abs() < 1e-4);
}

#[test]
fn expquad_heat_kernel_constant() {
    // independent time integral of (U-u)^(-1/2) e^0 (U-u)^(1/2) over [0, U] with eta = 1
    let m = expquad(1.0);
    let got = m.weighted_heat_kernel_quadrature(0.0, 0.0).unwrap();
    let cfg = QuadratureConfig::tight();
    let oracle = integrate_to_endpoint(
        |u| Ok((10.0 / (10.0 - u)).sqrt() * (10.0 - u).sqrt()),
        0.0,
        10.0,
        &cfg,
    )
    .unwrap();
    assert!(rel(got, oracle) < 1e-8);
    assert!(rel(got, 10f64.powf(1.5)) < 1e-8);
    // the printed constant (eta - 1/2)^-1 U^eta would give 20
    assert!((got - 20.0).abs() > 10.0);
}

#[test]
fn closed_form_tag_is_used() {
    let mut m = quadratic();
    m.closed_form = Some(ClosedFormTag::Quadratic);
    assert_eq!(m.weighted_heat_kernel(5.0, 2.0).unwrap(), 125.0 / 12.0 + 25.0);
    let bad = KernelModel::new(
        process(),
        TerminalFunctionSpec::Quadratic,
        WeightFunctionSpec::Power { eta: 1.0 },
        Some(ClosedFormTag::Quadratic),
    );
    assert!(bad.is_err());
}

#[test]
fn bond_examples() {
    let m = quadratic();
    assert_eq!(m.price_bond(3.0, 3.0, 0.7).unwrap(), 1.0);
    let p = m.price_bond(0.0, 5.0, 0.0).unwrap();
    assert!((p - 0.3125).abs() < 1e-9);
    let p = m.price_bond(0.0, 5.0, 1.0).unwrap();
    let q = QuadraticModel::new(process()).unwrap().bond_price(0.0, 5.0, 1.0).unwrap();
    assert!(rel(p, q) < 1e-8);
    assert!((p - 0.254808).abs() < 1e-6);
    let late = m.price_bond(0.0, 10.0 * (1.0 - 1e-6), 1.0).unwrap();
    assert!(late < 1e-9, "{late}");
}

#[test]
fn bond_monotone_in_maturity() {
    let m = quadratic();
    for x in [0.5, -1.5, 3.0] {
        let mut prev = 1.0;
        for k in 1..=8 {
            let p = m.price_bond(1.0, 1.0 + k as f64, x).unwrap();
            assert!(p > 0.0 && p < prev, "x={x} T={}: {p}", 1 + k);
            prev = p;
        }
    }
}

#[test]
fn price_asset_consistency() {
    let m = quadratic();
    for (t, big_t, x) in [(0.0, 5.0, 0.0), (2.0, 7.0, 1.4)] {
        let unit = m.price_asset(t, big_t, x, |_| 1.0).unwrap();
        assert!((unit - m.price_bond(t, big_t, x).unwrap()).abs() < 1e-10);
        assert_eq!(m.price_asset(t, big_t, x, |_| 0.0).unwrap(), 0.0);
    }
}

#[test]
fn digital_claim_by_symmetry_and_monte_carlo() {
    let m = quadratic();
    let v = m.price_asset(0.0, 5.0, 0.0, |y| if y > 0.0 { 1.0 } else { 0.0 }).unwrap();
    // f(5, y) is even in y and L_5 is centred, so half the bond
    assert!((v - 0.15625).abs() < 1e-9, "{v}");

    let f0 = 1000.0 / 12.0;
    let mut rng = path_rng(8, 0);
    let n = 400_000;
    let xs: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let y = 2.5f64.sqrt() * z;
            if y > 0.0 {
                (125.0 / 12.0 + 25.0 / 4.0 * y * y) / f0
            } else {
                0.0
            }
        })
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - v).abs() < 3.0 * (var / n as f64).sqrt(), "{mean} vs {v}");
}

#[test]
fn heat_kernel_positive() {
    for m in [quadratic(), expquad(0.8)] {
        for t in [0.0, 4.0, 9.0] {
            for x in [-3.0, 0.0, 2.0] {
                assert!(m.weighted_heat_kernel_quadrature(t, x).unwrap() > 0.0);
            }
        }
    }
}

#[test]
fn weight_examples() {
    assert!(check_weight_validity(&WeightFunctionSpec::Affine, 10.0, 21).unwrap().valid);
    let bad = check_weight_validity(&WeightFunctionSpec::Linear { c: 0.0, a_t: 1.0, a_u: 0.0 }, 10.0, 21).unwrap();
    assert!(!bad.valid && bad.max_violation > 0.0);
    let prod = WeightFunctionSpec::product(WeightFunctionSpec::Affine, WeightFunctionSpec::Power { eta: 1.5 });
    assert!(check_weight_validity(&prod, 10.0, 21).unwrap().valid);
}

#[test]
fn generic_family_is_a_supermartingale() {
    // exponential-linear F has no closed form; the engine alone must deliver
    let m = KernelModel::new(
        process(),
        TerminalFunctionSpec::ExponentialLinear { mu: 0.3 },
        WeightFunctionSpec::HorizonFunction { wbar: pricing_kernel::DecayFunction::exponential(0.2) },
        None,
    )
    .unwrap();
    let pairs = [(0.0, 3.0), (2.0, 6.0), (5.0, 8.0)];
    let xs = [-1.0, 0.0, 1.5];
    let r = check_supermartingale(&m, &pairs, &xs, SupermartingaleMethod::Quadrature { slack: 1e-10 }).unwrap();
    assert!(r.passed, "{r:?}");
}
