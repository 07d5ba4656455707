//! Seeded shot-by-shot sampling with separate system and control streams
//! that are joined only in post-processing.

mod config;
mod empirical;
mod io;
mod join;
mod record;
mod run;

pub use config::{ExperimentConfig, ExperimentKind, SamplingMode};
pub use empirical::{
    chi_square_homogeneity, empirical_chsh, empirical_parity, joint_counts, parity_by_theta, row_labels,
    system_counts, ChiSquareTest, ChshEstimate, EmpiricalCell, EmpiricalTable, ParityEstimate,
};
pub use io::{write_control_csv, write_ndjson, write_streams, write_system_csv, RunMetadata, StreamFormat};
pub use join::{delayed_join, JoinedData};
pub use record::{ControlRecord, MeasurementRecord, ShotSettings, SystemOutcome};
pub use run::{classical_mixture_run, run_experiment, Streams, GENERATOR_ID};
