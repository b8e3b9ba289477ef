//! Configuration, experiment orchestration and result persistence.

pub mod config;
pub mod experiments;
pub mod record;
pub mod stats;

pub use config::{parse_graph_ref, ExperimentConfig, Mode};
pub use experiments::{
    derive_seed, run_deletion_experiment, run_generalized_pipeline, run_polygraph_experiment,
    run_random_turan_pipeline, DeletionExperiment, PipelineExperiment, PolygraphExperiment,
};
pub use record::{emit_results, parse_results, ExperimentRecord};
