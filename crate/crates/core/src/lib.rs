//! Positive supermartingale pricing kernels built from weighted heat kernels
//! of Brownian bridge information processes.
//!
//! The crate is organised bottom-up:
//!
//! * [`process`]: the information process, its bridge law, posterior and
//!   measure change, plus Lévy random bridge densities.
//! * [`kernel`]: weight functions, terminal functions, propagators and the
//!   generic weighted heat kernel with bond and asset pricing by quadrature.
//! * [`closed_form`]: the quadratic and exponential-quadratic model families.
//! * [`option`]: European calls on discount bonds, closed form and generic.
//! * [`verification`]: supermartingale, PDE, measure-change and
//!   closed-form equivalence checks producing [`verification::CheckReport`]s.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod closed_form;
pub mod error;
pub mod kernel;
pub mod numerics;
pub mod option;
pub mod process;
pub mod verification;

pub use closed_form::{DecayFunction, ExpQuadraticModel, G1Spec, QuadraticModel};
pub use error::{Error, Result};
pub use kernel::{
    check_weight_validity, ClosedFormTag, KernelFunction, KernelMeasure, KernelModel, TerminalFunctionSpec,
    WeightFunctionSpec,
};
pub use option::{OptionCase, OptionSpec, QuadCoeffs};
pub use process::{InformationModel, Measure, PriorLaw};
