use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::neural::{AdamState, GaussianPolicy, ObsActionMap, ValueNet, ACTION_DIM};

/// PPO hyperparameters shared by all tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PpoConfig {
    pub gamma: f64,
    pub lambda: f64,
    pub clip_eps: f64,
    pub lr: f64,
    /// Complete episodes collected per iteration.
    pub episodes_per_iter: usize,
    pub epochs: usize,
    pub minibatch: usize,
    /// Standardize the scalarized advantages per batch.
    pub standardize_advantages: bool,
    /// Entropy bonus coefficient (0 disables it).
    pub entropy_coef: f64,
    /// Global gradient-norm clip for the policy and value steps.
    pub max_grad_norm: Option<f64>,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            gamma: 0.995,
            lambda: 0.95,
            clip_eps: 0.2,
            lr: 1e-4,
            episodes_per_iter: 4,
            epochs: 10,
            minibatch: 64,
            standardize_advantages: true,
            entropy_coef: 0.0,
            max_grad_norm: None,
        }
    }
}

/// The unit of evolution: a weight vector with its target policy, sample
/// policy and vector value network, plus the optimizer state of both nets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LearningTask {
    pub weight: [f64; 3],
    pub target: GaussianPolicy,
    pub sample: GaussianPolicy,
    pub value: ValueNet,
    pub policy_adam: AdamState,
    pub log_std_adam: AdamState,
    pub value_adam: AdamState,
    /// PPO iterations this task has been through.
    pub iterations: u64,
}

impl LearningTask {
    /// Randomly initialized task; the sample policy starts as a copy of the target.
    pub fn new<R: Rng + ?Sized>(weight: [f64; 3], io: ObsActionMap, lr: f64, rng: &mut R) -> Self {
        let target = GaussianPolicy::new(io, rng);
        let value = ValueNet::new(rng);
        Self::from_nets(weight, target, value, lr)
    }

    pub fn from_nets(weight: [f64; 3], target: GaussianPolicy, value: ValueNet, lr: f64) -> Self {
        Self {
            weight,
            sample: target.clone(),
            policy_adam: AdamState::new(target.mean.num_params(), lr),
            log_std_adam: AdamState::new(ACTION_DIM, lr),
            value_adam: AdamState::new(value.net.num_params(), lr),
            target,
            value,
            iterations: 0,
        }
    }

    /// Whether the sample policy currently equals the target policy.
    pub fn policies_synced(&self) -> bool {
        self.sample.mean.params() == self.target.mean.params()
            && self.sample.log_std() == self.target.log_std()
            && self.sample.io == self.target.io
    }
}
