//! Gauss–Hermite rules for expectations against a Gaussian law.
//!
//! Nodes come from the normalized Hermite function recurrence, which stays
//! stable well beyond 256 nodes. Rules for the
//! default escalation ladder are cached process-wide.

use std::borrow::Cow;
use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Node counts tried in order by [`gaussian_expectation`].
pub const LADDER: [usize; 3] = [64, 128, 256];

/// A rule for `E[g(Z)]` with `Z ~ N(0, 1)`: `sum_i weights[i] * g(nodes[i])`.
#[derive(Debug, Clone)]
pub struct GaussHermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermiteRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
        let (x, w) = physicists_rule(n);
        let nodes = x.iter().map(|xi| SQRT_2 * xi).collect();
        let weights = w.iter().map(|wi| wi / PI.sqrt()).collect();
        Self { nodes, weights }
    }

    /// Cached rule for sizes 1..=8 and the ladder sizes, freshly built
    /// otherwise.
    pub fn cached(n: usize) -> Cow<'static, GaussHermiteRule> {
        static SMALL: [OnceLock<GaussHermiteRule>; 8] = [const { OnceLock::new() }; 8];
        static LARGE: [OnceLock<GaussHermiteRule>; 3] = [const { OnceLock::new() }; 3];
        if (1..=8).contains(&n) {
            return Cow::Borrowed(SMALL[n - 1].get_or_init(|| Self::new(n)));
        }
        match LADDER.iter().position(|&m| m == n) {
            Some(i) => Cow::Borrowed(LARGE[i].get_or_init(|| Self::new(n))),
            None => Cow::Owned(Self::new(n)),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `E[g(mean + sqrt(variance) Z)]`.
    pub fn expect<G: Fn(f64) -> f64>(&self, mean: f64, variance: f64, g: G) -> f64 {
        let sd = variance.sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * g(mean + sd * z))
            .sum()
    }

    /// Fallible variant; stops at the first error.
    pub fn try_expect<G: Fn(f64) -> Result<f64>>(
        &self,
        mean: f64,
        variance: f64,
        g: G,
    ) -> Result<f64> {
        let sd = variance.sqrt();
        let mut acc = 0.0;
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * g(mean + sd * z)?;
        }
        Ok(acc)
    }
}

/// Normalized Hermite functions `(h_n(z), h_{n-1}(z))`, i.e. the
/// orthonormal polynomials times `exp(-z^2 / 2)`, so large rules neither
/// overflow nor underflow.
fn hermite_functions(n: usize, z: f64) -> (f64, f64) {
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let mut p1 = PIM4 * (-0.5 * z * z).exp();
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, p2)
}

/// Nodes (descending) and weights for the weight `exp(-x^2)` on the real
/// line. Positive roots are bracketed by a scan finer than the smallest
/// root spacing and refined by bisection.
fn physicists_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let half = n / 2;
    let mut roots = Vec::with_capacity(half);
    let step = std::f64::consts::PI / (2.0 * nf + 1.0).sqrt() / 16.0;
    let top = (2.0 * nf + 1.0).sqrt() + 2.0;
    let mut a = 0.5 * step;
    let mut fa = hermite_functions(n, a).0;
    while roots.len() < half && a < top {
        let b = a + step;
        let fb = hermite_functions(n, b).0;
        if (fa < 0.0) != (fb < 0.0) {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = hermite_functions(n, mid).0;
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    assert_eq!(roots.len(), half, "Gauss-Hermite root scan missed roots for n={n}");
    let weight = |z: f64| {
        let pp = (2.0 * nf).sqrt() * hermite_functions(n, z).1;
        2.0 * (-z * z).exp() / (pp * pp)
    };
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for &z in roots.iter().rev() {
        x.push(z);
        w.push(weight(z));
    }
    if n % 2 == 1 {
        x.push(0.0);
        w.push(weight(0.0));
    }
    for &z in &roots {
        x.push(-z);
        w.push(weight(z));
    }
    (x, w)
}

/// `E[g(Y)]` for `Y ~ N(mean, variance)` with node escalation.
///
/// Evaluates the ladder 64 → 128 → 256 and accepts the first size whose
/// value agrees with its predecessor within `rel_tol`. If even 256 nodes do
/// not settle, the 256-node value is returned only when it agrees with the
/// 128-node value within `sqrt(rel_tol)`; otherwise a non-convergence error
/// carries the last estimate.
pub fn gaussian_expectation<G: Fn(f64) -> f64>(
    mean: f64,
    variance: f64,
    rel_tol: f64,
    g: G,
) -> Result<f64> {
    if variance < 0.0 || !variance.is_finite() {
        return Err(Error::Domain(format!("variance {variance} must be finite and >= 0")));
    }
    if variance == 0.0 {
        return Ok(g(mean));
    }
    let mut prev: Option<f64> = None;
    for &n in LADDER.iter() {
        let v = GaussHermiteRule::cached(n).expect(mean, variance, &g);
        if !v.is_finite() {
            return Err(Error::Divergence(format!("Gauss-Hermite sum is {v}")));
        }
        if let Some(p) = prev {
            let diff = (v - p).abs();
            if diff <= rel_tol * v.abs().max(f64::MIN_POSITIVE) {
                return Ok(v);
            }
            if n == *LADDER.last().unwrap() {
                if diff <= rel_tol.sqrt() * v.abs() {
                    return Ok(v);
                }
                return Err(Error::QuadratureNonConvergence { estimate: v, error_bound: diff });
            }
        }
        prev = Some(v);
    }
    unreachable!()
}
