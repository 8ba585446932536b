use serde::{Deserialize, Serialize};

use crate::evolution::EmorlConfig;
use crate::sim::SimConfig;
use crate::{Error, Result};

/// A named test instance: number of SDs and UAV altitude on top of a base configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub name: String,
    #[serde(rename = "K")]
    pub num_devices: usize,
    #[serde(rename = "H")]
    pub altitude: f64,
}

impl InstanceSpec {
    pub fn new(num_devices: usize, altitude: f64) -> Self {
        Self { name: format!("I-({num_devices},{altitude})"), num_devices, altitude }
    }

    pub fn apply(&self, base: &SimConfig) -> SimConfig {
        SimConfig { num_devices: self.num_devices, altitude: self.altitude, ..base.clone() }
    }
}

/// The six instances I-(K,H) for K in {60, 100, 140} and H in {30, 50}.
pub fn standard_instances() -> Vec<InstanceSpec> {
    [60, 100, 140]
        .into_iter()
        .flat_map(|k| [30.0, 50.0].map(|h| InstanceSpec::new(k, h)))
        .collect()
}

pub fn find_instance(name: &str) -> Result<InstanceSpec> {
    standard_instances()
        .into_iter()
        .find(|i| i.name == name)
        .ok_or_else(|| Error::Usage(format!("unknown instance {name:?}")))
}

/// Reduced sizes for runs on a single workstation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeskScale {
    pub num_devices: usize,
    pub area: f64,
    pub slots: usize,
    pub g_max: usize,
    pub phi_warm: usize,
    pub phi_task: usize,
    pub e_eval: usize,
    pub delta: usize,
}

pub fn desk_scale_preset() -> DeskScale {
    DeskScale { num_devices: 20, area: 200.0, slots: 100, g_max: 10, phi_warm: 10, phi_task: 5, e_eval: 3, delta: 4 }
}

impl DeskScale {
    pub fn apply(&self, sim: &mut SimConfig, emorl: &mut EmorlConfig) {
        sim.num_devices = self.num_devices;
        sim.area_x = self.area;
        sim.area_y = self.area;
        sim.slots = self.slots;
        emorl.g_max = self.g_max;
        emorl.phi_warm = self.phi_warm;
        emorl.phi_task = self.phi_task;
        emorl.e_eval = self.e_eval;
        emorl.delta = self.delta;
    }
}
