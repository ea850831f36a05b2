//! Synthetic instances, the comparison baseline and the CSV experiment
//! runner.

mod baseline;
mod generate;
mod runner;

pub use baseline::{baseline_uncapacitated, SOLVER_NAME as BASELINE_NAME};
pub use generate::{generate, GeneratorSpec, GraphKind, Instance, WeightDist, TASK_ATTEMPTS};
pub use runner::{
    parse_spec_file, run_experiments, run_instances, write_csv, BenchOptions, BenchSolver, ExperimentRow, CSV_HEADER,
};
