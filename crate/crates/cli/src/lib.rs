//! Command-line laboratory on top of `kpzlab`: configuration, experiment
//! orchestration, and CSV/JSON data files.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod table;

pub use config::{Experiment, ExperimentConfig, Format};
pub use error::{HarnessError, Result};
pub use experiments::{run_experiment, Reference};
pub use table::{read_data_file, DataFile, Report, Table};
