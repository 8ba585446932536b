//! Experiment orchestration: instance table, desk-scale preset, run
//! manifests, and the train / eval / replay pipelines behind the CLI.

mod instances;
mod manifest;
mod pipeline;

pub use instances::{desk_scale_preset, find_instance, standard_instances, DeskScale, InstanceSpec};
pub use manifest::{Algorithm, RunManifest, VERSION};
pub use pipeline::{
    eval_fronts, policy_path, replay_policy, train, EvalOptions, ReplayOptions, TrainOptions,
};
