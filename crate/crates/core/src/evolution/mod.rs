//! The evolutionary outer loop: weight lattice, warm-up, performance-buffer
//! task population, external Pareto archive and per-weight task selection.

mod archive;
mod eval;
mod lattice;
mod population;
mod run;

pub use archive::{update_ep, ArchiveEntry, EpArchive};
pub use eval::{evaluate_policy, evaluate_with, PolicyEvaluation};
pub use lattice::{generate_weight_lattice, WeightLattice};
pub use population::{
    assign_and_truncate, buffer_directions, select_tasks, select_indices, update_population,
    Member, TaskPopulation,
};
pub use run::{run_emorl, write_checkpoint, EmorlConfig, EmorlResult, GenerationReport};
