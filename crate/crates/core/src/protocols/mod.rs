//! Analytic pipelines for the three experiments: delayed-choice HOM,
//! conditional CHSH and delayed-choice GHZ phase estimation.

pub mod chsh;
pub mod closed_form;
pub mod ghz;
pub mod hom;
pub mod metrology;
mod table;

pub use chsh::{chsh_table, chsh_table_in_basis, chsh_value, optimal_chsh_angles, ChshSettings};
pub use ghz::ghz_decomposition_residual;
pub use hom::{hom_pair_probability, hom_probability, hom_table, hom_table_in_basis};
pub use metrology::{parity_expectation, phase_sensitivity, MetrologySetup, Sensitivity};
pub use table::{Condition, ProbabilityTable};
