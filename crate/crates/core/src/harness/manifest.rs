use std::path::Path;

use serde::{Deserialize, Serialize};

use super::instances::InstanceSpec;
use crate::baselines::GaConfig;
use crate::evolution::EmorlConfig;
use crate::sim::SimConfig;
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Emorl,
    Nsga2,
    Moead,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Emorl => "emorl",
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Moead => "moead",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "emorl" => Ok(Algorithm::Emorl),
            "nsga2" => Ok(Algorithm::Nsga2),
            "moead" => Ok(Algorithm::Moead),
            other => Err(Error::Usage(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Everything needed to rerun a training run bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub algorithm: Algorithm,
    pub instance: InstanceSpec,
    pub desk_scale: bool,
    pub sim: SimConfig,
    pub emorl: Option<EmorlConfig>,
    pub ga: Option<GaConfig>,
    pub master_seed: u64,
    pub instance_seed: u64,
    pub training_seed: u64,
    pub eval_seeds: Vec<u64>,
    pub version: String,
    pub wall_clock_secs: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
