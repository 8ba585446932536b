//! Trajectory control and task offloading (TCTO) for a UAV-assisted mobile
//! edge computing system, treated as a three-objective Markov decision process.
//!
//! The crate is split along the pipeline:
//!
//! - [`sim`]: the slotted UAV/MEC simulator with reset/step semantics.
//! - [`neural`]: small dense networks with analytic gradients and Adam.
//! - [`mmppo`]: multi-task multi-objective PPO over learning tasks.
//! - [`evolution`]: the evolutionary outer loop (task population, EP archive).
//! - [`baselines`]: NSGA-II and MOEA/D over open-loop action chromosomes.
//! - [`metrics`]: normalization, IGD, exact 3-D hypervolume, COI family, Friedman ranks.
//! - [`harness`]: instances, seeds, presets, run orchestration and file formats.

pub mod baselines;
pub mod error;
pub mod evolution;
pub mod harness;
pub mod metrics;
pub mod mmppo;
pub mod neural;
pub mod pareto;
pub mod seed;
pub mod sim;

pub use error::{Error, Result};

/// Number of objectives of the TCTO problem: delay, energy, collected tasks.
pub const NUM_OBJECTIVES: usize = 3;

/// A point in objective space. All three components are maximized.
pub type Objectives = [f64; NUM_OBJECTIVES];
