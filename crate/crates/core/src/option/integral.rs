use crate::numerics::normal::{cdf, pdf};

/// `∫_lo^hi (c y^2 + b y + a) φ(y) dy`
/// `= (a + c)[N(hi) - N(lo)] + (b + c lo) φ(lo) - (b + c hi) φ(hi)`,
/// with the boundary terms dropped at infinite limits.
pub fn gaussian_quadratic_integral(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> f64 {
    let edge = |y: f64| if y.is_infinite() { 0.0 } else { (b + c * y) * pdf(y) };
    (a + c) * (cdf(hi) - cdf(lo)) + edge(lo) - edge(hi)
}

/// `∫ (c y^2 + b y + a)^+ φ(y) dy` given the sorted real roots when
/// `c != 0` and the discriminant is positive.
pub fn positive_part_integral(a: f64, b: f64, c: f64, roots: Option<(f64, f64)>) -> f64 {
    const INF: f64 = f64::INFINITY;
    if c == 0.0 {
        if b == 0.0 {
            return a.max(0.0);
        }
        let y0 = -a / b;
        return if b > 0.0 {
            gaussian_quadratic_integral(a, b, 0.0, y0, INF)
        } else {
            gaussian_quadratic_integral(a, b, 0.0, -INF, y0)
        };
    }
    match roots {
        Some((lo, hi)) if c < 0.0 => gaussian_quadratic_integral(a, b, c, lo, hi).max(0.0),
        Some((lo, hi)) => (a + c) - gaussian_quadratic_integral(a, b, c, lo, hi),
        None if c < 0.0 => 0.0,
        None => a + c,
    }
}
