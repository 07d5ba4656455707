//! Dense state-vector engine for spin degrees of freedom.

mod density;
mod equivalence;
mod operator;
mod state;

pub use density::DensityMatrix;
pub use equivalence::{local_unitary_overlap, max_local_unitary_overlap};
pub use operator::SingleQubitOperator;
pub use state::{
    bell_relative_state, ghz_state, tripartite_spin_state, Measurement, Outcome, Sign, StateVector,
    MAX_QUBITS,
};
