//! Simulation, direct-method estimation and Monte-Carlo consistency runs.

pub mod estimate;
pub mod experiment;
pub mod sim;
pub mod tk;

pub use estimate::{estimate_direct, EstimateOptions, EstimationResult};
pub use experiment::{consistency_experiment, ConsistencyReport, ExperimentConfig, Trend};
pub use sim::{simulate, DataRecord, SimConfig};
pub use tk::{tk_closed_form_check, TkReport};
