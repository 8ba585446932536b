use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::mlp::{Mlp, OutputActivation};
use super::HIDDEN;
use crate::sim::{ActionVector, Observation, SimConfig};
use crate::{Error, Result};

pub const OBS_DIM: usize = 4;
pub const ACTION_DIM: usize = 3;
pub const LOG_STD_MIN: f64 = -5.0;
pub const LOG_STD_MAX: f64 = 2.0;
const LOG_STD_INIT: f64 = -0.5;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Observation normalization and action scaling tied to a scenario.
///
/// Positions are divided by the area sides, the queue by its capacity, and
/// the collected count by the largest count seen while training.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObsActionMap {
    pub area: [f64; 2],
    pub queue_cap: f64,
    pub collected_scale: f64,
    pub d_max: f64,
}

impl ObsActionMap {
    pub fn for_config(cfg: &SimConfig) -> Self {
        Self {
            area: [cfg.area_x, cfg.area_y],
            queue_cap: cfg.uav_queue_cap as f64,
            collected_scale: 1.0,
            d_max: cfg.d_max,
        }
    }

    pub fn normalize(&self, obs: &Observation) -> [f64; OBS_DIM] {
        [
            obs.x / self.area[0],
            obs.y / self.area[1],
            obs.queue as f64 / self.queue_cap,
            obs.collected as f64 / self.collected_scale,
        ]
    }

    pub fn observe_collected(&mut self, collected: u32) {
        self.collected_scale = self.collected_scale.max(collected as f64);
    }

    /// Maps a point of the unit cube to an action. Components outside
    /// `[0, 1]` are clamped first.
    pub fn scale_action(&self, u: &[f64; ACTION_DIM]) -> ActionVector {
        let c = |v: f64| v.clamp(0.0, 1.0);
        ActionVector {
            theta: c(u[0]) * std::f64::consts::TAU,
            d: c(u[1]) * self.d_max,
            b: c(u[2]),
        }
    }

    /// Inverse of [`scale_action`](Self::scale_action) on admissible actions.
    pub fn unscale_action(&self, a: &ActionVector) -> [f64; ACTION_DIM] {
        [a.theta / std::f64::consts::TAU, a.d / self.d_max, a.b]
    }
}

/// One stochastic draw from a policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicySample {
    pub action: ActionVector,
    /// Pre-clamp sample in the normalized action cube.
    pub raw: [f64; ACTION_DIM],
    pub log_prob: f64,
}

/// Diagonal Gaussian policy over the normalized action cube. The mean comes
/// from a sigmoid-output network; the log standard deviation is a free,
/// state-independent parameter vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianPolicy {
    pub mean: Mlp,
    log_std: [f64; ACTION_DIM],
    pub io: ObsActionMap,
}

impl GaussianPolicy {
    pub fn new<R: Rng + ?Sized>(io: ObsActionMap, rng: &mut R) -> Self {
        let dims = [OBS_DIM, HIDDEN[0], HIDDEN[1], ACTION_DIM];
        let mean = Mlp::orthogonal(&dims, OutputActivation::Sigmoid, 0.01, rng)
            .expect("static dims are valid");
        Self { mean, log_std: [LOG_STD_INIT; ACTION_DIM], io }
    }

    pub fn from_parts(mean: Mlp, log_std: [f64; ACTION_DIM], io: ObsActionMap) -> Result<Self> {
        if mean.input_dim() != OBS_DIM || mean.output_dim() != ACTION_DIM {
            return Err(Error::Dimension { expected: ACTION_DIM, actual: mean.output_dim() });
        }
        if mean.output_activation() != OutputActivation::Sigmoid {
            return Err(Error::Format("policy mean network must use a sigmoid output".into()));
        }
        let mut p = Self { mean, log_std, io };
        p.set_log_std(log_std);
        Ok(p)
    }

    pub fn log_std(&self) -> [f64; ACTION_DIM] {
        self.log_std
    }

    pub fn set_log_std(&mut self, log_std: [f64; ACTION_DIM]) {
        self.log_std = log_std.map(|v| v.clamp(LOG_STD_MIN, LOG_STD_MAX));
    }

    pub fn mean_action_raw(&self, obs_norm: &[f64]) -> Result<[f64; ACTION_DIM]> {
        let m = self.mean.forward(obs_norm)?;
        Ok([m[0], m[1], m[2]])
    }

    /// Deterministic (evaluation-mode) action: the scaled mean.
    pub fn act_deterministic(&self, obs: &Observation) -> Result<ActionVector> {
        let mean = self.mean_action_raw(&self.io.normalize(obs))?;
        Ok(self.io.scale_action(&mean))
    }

    pub fn sample<R: Rng + ?Sized>(&self, obs_norm: &[f64], rng: &mut R) -> Result<PolicySample> {
        let mean = self.mean_action_raw(obs_norm)?;
        let mut raw = [0.0; ACTION_DIM];
        for i in 0..ACTION_DIM {
            let z: f64 = rng.sample(StandardNormal);
            raw[i] = mean[i] + self.log_std[i].exp() * z;
        }
        let log_prob = self.log_prob_at(&mean, &raw);
        Ok(PolicySample { action: self.io.scale_action(&raw), raw, log_prob })
    }

    fn log_prob_at(&self, mean: &[f64; ACTION_DIM], raw: &[f64; ACTION_DIM]) -> f64 {
        (0..ACTION_DIM)
            .map(|i| {
                let z = (raw[i] - mean[i]) / self.log_std[i].exp();
                -0.5 * z * z - self.log_std[i] - HALF_LN_2PI
            })
            .sum()
    }

    pub fn log_prob(&self, obs_norm: &[f64], raw: &[f64; ACTION_DIM]) -> Result<f64> {
        let mean = self.mean_action_raw(obs_norm)?;
        Ok(self.log_prob_at(&mean, raw))
    }

    /// Accumulates `coef * d log pi(raw | obs) / d params` into the mean
    /// network gradient and the log-std gradient. Returns the log-probability.
    pub fn accumulate_log_prob_grad(
        &self,
        obs_norm: &[f64],
        raw: &[f64; ACTION_DIM],
        coef: f64,
        mean_grads: &mut [f64],
        log_std_grads: &mut [f64; ACTION_DIM],
    ) -> Result<f64> {
        let cache = self.mean.forward_cached(obs_norm)?;
        let out = cache.output();
        let mean = [out[0], out[1], out[2]];
        let mut upstream = [0.0; ACTION_DIM];
        for i in 0..ACTION_DIM {
            let var = (2.0 * self.log_std[i]).exp();
            let diff = raw[i] - mean[i];
            upstream[i] = coef * diff / var;
            log_std_grads[i] += coef * (diff * diff / var - 1.0);
        }
        self.mean.backward_into(&cache, &upstream, mean_grads)?;
        Ok(self.log_prob_at(&mean, raw))
    }

    /// Entropy of the action distribution (independent of the state).
    pub fn entropy(&self) -> f64 {
        self.log_std.iter().map(|s| s + 0.5 + HALF_LN_2PI).sum()
    }

    /// Serializes the policy to its JSON blob (shape header plus parameters).
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&PolicyBlob { format: BLOB_FORMAT.into(), policy: self.clone() })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let blob: PolicyBlob = serde_json::from_str(text)?;
        if blob.format != BLOB_FORMAT {
            return Err(Error::Format(format!("unknown policy blob format {:?}", blob.format)));
        }
        let p = blob.policy;
        let mean = Mlp::from_params(p.mean.dims(), p.mean.output_activation(), p.mean.params().to_vec())?;
        Self::from_parts(mean, p.log_std, p.io)
    }
}

const BLOB_FORMAT: &str = "tcto-gaussian-policy-v1";

#[derive(Serialize, Deserialize)]
struct PolicyBlob {
    format: String,
    policy: GaussianPolicy,
}

/// Vector-valued state value: one output per objective. The network
/// predicts values divided by a per-objective `scale`, so that objectives
/// whose returns differ by orders of magnitude train at comparable rates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValueNet {
    pub net: Mlp,
    #[serde(default = "unit_scale")]
    pub scale: [f64; 3],
    #[serde(default)]
    pub calibrated: bool,
}

fn unit_scale() -> [f64; 3] {
    [1.0; 3]
}

impl ValueNet {
    pub fn new<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let dims = [OBS_DIM, HIDDEN[0], HIDDEN[1], crate::NUM_OBJECTIVES];
        let net = Mlp::orthogonal(&dims, OutputActivation::Identity, 1.0, rng).expect("static dims are valid");
        Self { net, scale: unit_scale(), calibrated: false }
    }

    pub fn from_net(net: Mlp) -> Result<Self> {
        if net.output_dim() != crate::NUM_OBJECTIVES {
            return Err(Error::Dimension { expected: crate::NUM_OBJECTIVES, actual: net.output_dim() });
        }
        Ok(Self { net, scale: unit_scale(), calibrated: false })
    }

    /// Fixes the output scale once; later calls are ignored. Nonpositive or
    /// non-finite entries fall back to one.
    pub fn calibrate(&mut self, scale: [f64; 3]) {
        if !self.calibrated {
            self.scale = scale.map(|s| if s.is_finite() && s > 1e-8 { s } else { 1.0 });
            self.calibrated = true;
        }
    }

    pub fn predict(&self, obs_norm: &[f64]) -> Result<[f64; 3]> {
        let v = self.net.forward(obs_norm)?;
        Ok([0, 1, 2].map(|k| v[k] * self.scale[k]))
    }
}
