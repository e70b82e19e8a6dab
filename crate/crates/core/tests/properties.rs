use pricing_kernel::closed_form::quadratic_heat_kernel;
use pricing_kernel::numerics::normal;
use pricing_kernel::option::{gaussian_quadratic_integral, positive_part_integral, quad_option_coeffs, quad_option_price};
use pricing_kernel::process::{lrb_transition_density, LrbDensitySpec};
use pricing_kernel::verification::{check_supermartingale, SupermartingaleMethod};
use pricing_kernel::{
    DecayFunction, ExpQuadraticModel, G1Spec, InformationModel, OptionSpec, PriorLaw, QuadraticModel,
};
use proptest::prelude::*;

const U: f64 = 10.0;

fn quad() -> QuadraticModel {
    QuadraticModel::new(InformationModel::new(1.0, U, PriorLaw::equal_atoms(&[-0.1, 0.1])).unwrap()).unwrap()
}

fn prior() -> impl Strategy<Value = PriorLaw> {
    prop_oneof![
        prop::collection::vec((-3.0..3.0f64, 0.1..1.0f64), 1..5).prop_map(|raw| {
            let total: f64 = raw.iter().map(|r| r.1).sum();
            PriorLaw::Discrete { atoms: raw.into_iter().map(|(v, w)| (v, w / total)).collect() }
        }),
        (-2.0..2.0f64, 0.1..3.0f64).prop_map(|(mean, variance)| PriorLaw::Gaussian { mean, variance }),
        (-2.0..0.0f64, 0.1..2.0f64).prop_map(|(lo, w)| PriorLaw::Uniform { lo, hi: lo + w }),
    ]
}

/// `(s, t, T)` with `0 <= s < t < T < U`.
fn option_times() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0..0.9f64, 0.05..0.95f64, 0.05..0.95f64).prop_map(|(a, b, c)| {
        let s = a * 8.0;
        let t = s + b * (9.0 - s);
        let big_t = t + c * (9.5 - t);
        (s, t, big_t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bridge_tower(a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64, x in -5.0..5.0f64) {
        let m = quad().process;
        let t = c * 9.9;
        let r = b * t;
        let s = a * r;
        let sr = m.bridge_conditional_law(s, r, x).unwrap();
        // L_r = sr.mean + sd Z, then L_t | L_r is affine in L_r
        let k = (U - t) / (U - r);
        let rt = m.bridge_conditional_law(r, t, 0.0).unwrap();
        let st = m.bridge_conditional_law(s, t, x).unwrap();
        prop_assert!((k * sr.mean - st.mean).abs() <= 1e-12 * (1.0 + x.abs()));
        prop_assert!((k * k * sr.variance + rt.variance - st.variance).abs() <= 1e-12 * U);
    }

    #[test]
    fn posterior_in_hull(p in prior(), t in 0.0..9.99f64, ell in -20.0..20.0f64, sigma in 0.2..2.0f64) {
        let m = InformationModel::new(sigma, U, p).unwrap();
        let (lo, hi) = m.prior.support_hull();
        let mean = m.posterior_mean(t, ell).unwrap();
        prop_assert!(mean >= lo - 1e-12 && mean <= hi + 1e-12, "{mean} not in [{lo}, {hi}]");
        prop_assert!(m.log_likelihood_ratio(t, ell).unwrap().is_finite());
        prop_assert!(m.measure_change_martingale(t, ell).unwrap() >= 0.0);
    }

    #[test]
    fn lrb_point_mass_collapses(s in 0.0..5.0f64, dt in 0.1..4.0f64, x in -3.0..3.0f64, y in -3.0..3.0f64, z in -2.0..2.0f64) {
        let t = s + dt;
        let d = lrb_transition_density(&LrbDensitySpec::brownian(), &PriorLaw::point_mass(z), U, s, t, x, y).unwrap();
        let mean = x + (z - x) * (t - s) / (U - s);
        let oracle = normal::density(y, mean, (t - s) * (U - t) / (U - s));
        prop_assert!((d - oracle).abs() < 1e-10);
    }

    #[test]
    fn gq_additivity(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64,
                     lo in -6.0..0.0f64, w1 in 0.0..4.0f64, w2 in 0.0..4.0f64) {
        let (mid, hi) = (lo + w1, lo + w1 + w2);
        let whole = gaussian_quadratic_integral(a, b, c, lo, hi);
        let split = gaussian_quadratic_integral(a, b, c, lo, mid) + gaussian_quadratic_integral(a, b, c, mid, hi);
        prop_assert!((whole - split).abs() <= 1e-12 * (1.0 + a.abs() + b.abs() + c.abs()));
        let left = gaussian_quadratic_integral(a, b, c, f64::NEG_INFINITY, mid)
            + gaussian_quadratic_integral(a, b, c, mid, f64::INFINITY);
        prop_assert!((left - (a + c)).abs() <= 1e-12 * (1.0 + a.abs() + b.abs() + c.abs()));
    }

    #[test]
    fn positive_part_dominates_mean(a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64) {
        let disc = b * b - 4.0 * a * c;
        let roots = if c != 0.0 && disc > 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            let (r1, r2) = (q / c, a / q);
            Some((r1.min(r2), r1.max(r2)))
        } else {
            None
        };
        let ip = positive_part_integral(a, b, c, roots);
        let tol = 1e-12 * (1.0 + a.abs() + b.abs() + c.abs());
        prop_assert!(ip >= -tol);
        prop_assert!(ip >= a + c - tol, "E[p^+] = {ip} < E[p] = {}", a + c);
    }

    #[test]
    fn option_bounds_and_monotonicity((s, t, big_t) in option_times(), l in -3.0..3.0f64,
                                      k1 in 0.0..1.2f64, dk in 0.0..0.5f64) {
        let m = quad();
        let p_st = m.bond_price(s, t, l).unwrap();
        let p_st_t = m.bond_price(s, big_t, l).unwrap();
        let c1 = quad_option_price(&m, &OptionSpec::new(s, t, big_t, k1, l)).unwrap().price;
        let c2 = quad_option_price(&m, &OptionSpec::new(s, t, big_t, k1 + dk, l)).unwrap().price;
        prop_assert!(c1 >= (p_st_t - k1 * p_st).max(0.0) - 1e-9, "{c1}");
        prop_assert!(c1 <= p_st_t + 1e-9);
        prop_assert!(c2 <= c1 + 1e-12);
    }

    #[test]
    fn option_continuity_across_boundaries((s, t, big_t) in option_times(), l in -3.0..3.0f64) {
        let m = quad();
        let (dt, dtt) = (U - t, U - big_t);
        // B = 0 makes c = 0; A = 0 makes the discriminant vanish
        let k_b = dtt.powi(4) / dt.powi(4);
        let k_a = (3.0 * (big_t - t) * dtt.powi(3) / dt + dtt.powi(3)) / dt.powi(3);
        let bond = m.bond_price(s, big_t, l).unwrap();
        for k in [k_b, k_a] {
            let o = OptionSpec::new(s, t, big_t, k, l);
            let lo = quad_option_price(&m, &o.with_strike(k - 1e-9)).unwrap().price;
            let hi = quad_option_price(&m, &o.with_strike(k + 1e-9)).unwrap().price;
            // C lives in [0, P_sT] and vanishes like (K_A - K)^(3/2) at the A boundary
            prop_assert!((lo - hi).abs() <= 1e-6 * bond, "K={k}: {lo} vs {hi}");
        }
        let q = quad_option_coeffs(&m, &OptionSpec::new(s, t, big_t, k_b, l)).unwrap();
        prop_assert!(q.big_b.abs() < 1e-12);
    }

    #[test]
    fn kernels_and_rates_positive(t in 0.0..9.99f64, x in -6.0..6.0f64, eta in 0.6..2.5f64) {
        let m = quad();
        prop_assert!(quadratic_heat_kernel(U, t, x) > 0.0);
        let r = m.short_rate(t, x).unwrap();
        prop_assert!(r >= 0.0);
        if x.abs() > 1e-8 {
            prop_assert!(r > 0.0);
        }
        let e = ExpQuadraticModel::new(m.process.clone(), eta, DecayFunction::exponential(0.3), G1Spec::special()).unwrap();
        prop_assert!(e.f_tilde(t, x).unwrap() > 0.0);
        prop_assert!(e.short_rate(t, x).unwrap() > 0.0);
    }

    #[test]
    fn bond_prices_in_unit_interval(t in 0.0..9.0f64, frac in 0.0..1.0f64, x in -4.0..4.0f64) {
        let m = quad();
        let big_t = t + frac * (9.9 - t);
        let p = m.bond_price(t, big_t, x).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampled_supermartingale(s in 0.0..8.0f64, frac in 0.05..1.0f64, x in -3.0..3.0f64, eta in 0.6..2.0f64) {
        let t = s + frac * (9.5 - s);
        let method = SupermartingaleMethod::Quadrature { slack: 1e-10 };
        let q = check_supermartingale(&quad(), &[(s, t)], &[x], method).unwrap();
        prop_assert!(q.passed, "{q:?}");
        let e = ExpQuadraticModel::new(quad().process, eta, DecayFunction::exponential(0.3), G1Spec::special()).unwrap();
        let r = check_supermartingale(&e, &[(s, t)], &[x], method).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }
}
