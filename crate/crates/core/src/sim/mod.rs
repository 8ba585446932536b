//! Discrete-time simulator of the UAV-assisted MEC system.
//!
//! Each slot runs, in order: task arrivals at the SDs, collection from the SDs
//! covered at the UAV's current position, the offload/local split of the
//! UAV's computing queue, delay and energy accounting, movement (clamped to
//! the area), and finally the queue rollover into the next slot. The observed
//! collected count of slot `t` is therefore known before the slot's action is
//! chosen.

mod config;
mod env;
mod log;
pub mod physics;

pub use config::{OffloadMode, PathlossParams, PathlossSign, PropulsionParams, SimConfig};
pub use env::{
    ActionVector, Observation, RewardVector, SlotOutcome, SmartDevice, TaskLedger, UavMecEnv,
    UavState,
};
pub use log::{episode_totals, write_episode_csv, EpisodeTotals};
pub use physics::{coverage_radius, data_rate, pathloss, propulsion_power};

/// Everything needed to build an environment for one instance: the world
/// configuration and the seed of its SD layout.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnvFactory {
    pub cfg: SimConfig,
    pub instance_seed: u64,
}

impl EnvFactory {
    pub fn new(cfg: SimConfig, instance_seed: u64) -> Self {
        Self { cfg, instance_seed }
    }

    pub fn build(&self) -> crate::Result<UavMecEnv> {
        UavMecEnv::new(self.cfg.clone(), self.instance_seed)
    }
}
