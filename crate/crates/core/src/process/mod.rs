//! The information process: bridge laws, Bayes posterior of the terminal
//! factor, the measure-change martingale, exact path simulation and Lévy
//! random bridge transition densities.

mod information;
pub mod lrb;
mod prior;
pub mod simulation;

pub use information::{GaussianLaw, InformationModel, HORIZON_GUARD};
pub use lrb::{lrb_transition_density, BrownianDensity, LevyDensity, LrbDensitySpec, PsiQuadrature};
pub use prior::{PriorLaw, Tilted};
pub use simulation::{simulate_path, simulate_paths, Measure, PathSample};

pub(crate) use information::{bridge_conditional_law, check_time};
