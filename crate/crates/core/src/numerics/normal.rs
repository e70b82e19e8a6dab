//! Standard normal density and distribution function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density. Returns 0 at ±∞.
pub fn pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function, accurate in both tails.
pub fn cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Gaussian density with the given mean and variance.
pub fn density(x: f64, mean: f64, variance: f64) -> f64 {
    let z = x - mean;
    (-0.5 * z * z / variance).exp() / (2.0 * PI * variance).sqrt()
}

/// Log of the Gaussian density with the given mean and variance.
pub fn log_density(x: f64, mean: f64, variance: f64) -> f64 {
    let z = x - mean;
    -0.5 * z * z / variance - 0.5 * (2.0 * PI * variance).ln()
}
