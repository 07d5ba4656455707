//! Delayed-choice quantum statistics, conditional CHSH nonlocality and
//! delayed-choice GHZ phase estimation, simulated from first principles.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`); the aliases below fix it to `f64`, which is what the
//! sampler and the command-line front end use.

pub mod cli;
pub mod error;
pub mod fock;
mod linalg;
pub mod protocols;
pub mod qubit;
pub mod sampler;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type StateVector = qubit::StateVector<f64>;
pub type DensityMatrix = qubit::DensityMatrix<f64>;
pub type SingleQubitOperator = qubit::SingleQubitOperator<f64>;
pub type FockPolynomial = fock::FockPolynomial<f64>;
pub type FockMonomial = fock::FockMonomial<f64>;
pub type ProbabilityTable = protocols::ProbabilityTable<f64>;
pub type ChshSettings = protocols::ChshSettings<f64>;
pub type MetrologySetup = protocols::MetrologySetup<f64>;
