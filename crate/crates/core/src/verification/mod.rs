//! Checks that a kernel is what it claims to be: supermartingale tests,
//! the partial differential inequality, the measure change, closed forms
//! against quadrature, and the errata report. Every check returns
//! [`CheckReport`]s and is deterministic given its seed.

mod equivalence;
mod errata;
mod measure_change;
mod pde;
mod report;
mod suite;
mod supermartingale;

pub use equivalence::{check_closed_form_equivalence, ClosedFormCatalogue, EquivalenceGrid};
pub use errata::errata_report;
pub use measure_change::{check_measure_change, MeasureChangeConfig, SdeScheme};
pub use pde::{check_pde_inequality, pde_lhs, PdeSteps};
pub use report::{summary_table, CheckReport};
pub use suite::{run_suite, shipped_process, supermartingale_grid, Suite, SuiteConfig};
pub use supermartingale::{check_supermartingale, SupermartingaleMethod};
