//! The quadratic and exponential-quadratic pricing-kernel families, with
//! closed-form kernels, bond prices, short rates and market prices of risk.

mod decay;
mod expquad;
mod quadratic;

pub use decay::DecayFunction;
pub use expquad::{expquad_heat_kernel, expquad_martingale, ExpQuadraticModel, G1Marker, G1Spec, EXPONENT_CAP};
pub use quadratic::{quadratic_heat_kernel, QuadraticModel};
