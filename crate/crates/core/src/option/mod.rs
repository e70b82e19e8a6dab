//! European calls on discount bonds: the closed-form quadratic-model pricer
//! with its Gaussian-quadratic case analysis, and the generic pricer that
//! integrates over the exercise set of any kernel model.

mod coeffs;
mod generic;
mod integral;
mod quadratic;

pub use coeffs::{quad_option_coeffs, OptionSpec, QuadCoeffs};
pub use generic::{expquad_option_price, lrb_option_price_generic, GenericOptionQuote, SCAN_POINTS};
pub use integral::{gaussian_quadratic_integral, positive_part_integral};
pub use quadratic::{quad_option_price, OptionCase, OptionQuote};
