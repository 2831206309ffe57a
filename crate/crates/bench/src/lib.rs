//! Experiment runner for the extrapolation integrators: specs, CSV rows and
//! the preset matrices behind the `bench` binary.

pub mod experiment;
pub mod presets;
pub mod row;

pub use experiment::{run, run_matrix, ExperimentSpec, ProblemSpec, RunOutcome, Stepping};
pub use row::{read_csv, write_csv, ResultRow, Status};
