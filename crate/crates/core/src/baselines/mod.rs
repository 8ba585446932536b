//! Direct-encoding evolutionary baselines. A chromosome holds one normalized
//! (theta, d, b) triple per slot and is scored by replaying it on the simulator.

mod chromosome;
mod moead;
mod nsga2;
mod operators;

pub use chromosome::{decode, evaluate_chromosome, Chromosome, GaConfig, GaFront, ObjectiveMode};
pub use moead::{moead_neighbors, moead_run, moead_weights, replace_neighbors, tchebycheff};
pub use nsga2::{environmental_selection, nsga2_run};
pub use operators::{reset_mutation, sbx_crossover};
