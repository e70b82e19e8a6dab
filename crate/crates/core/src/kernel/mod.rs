//! Weighted heat kernels: weight functions and their validity check,
//! terminal functions, propagators, and generic bond and asset pricing by
//! quadrature.

mod model;
mod terminal;
mod weight;

pub use model::{ClosedFormTag, KernelFunction, KernelMeasure, KernelModel};
pub use terminal::{GaussianFactor, TerminalFunctionSpec};
pub use weight::{check_weight_validity, WeightFunctionSpec, WeightValidityReport, WEIGHT_TOL};
