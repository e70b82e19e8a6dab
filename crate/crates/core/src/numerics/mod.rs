//! Quadrature rules and special functions shared by every model module.

pub mod adaptive;
pub mod gauss_hermite;
pub mod gauss_legendre;
pub mod normal;

pub use adaptive::{integrate, integrate_real_line, integrate_to_endpoint, QuadratureConfig};
pub use gauss_hermite::{gaussian_expectation, GaussHermiteRule};
pub use gauss_legendre::GaussLegendreRule;
