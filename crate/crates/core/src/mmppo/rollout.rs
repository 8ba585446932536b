use rand::Rng;

use super::task::LearningTask;
use crate::neural::{ACTION_DIM, OBS_DIM};
use crate::sim::{episode_totals, EpisodeTotals, UavMecEnv};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    /// Normalized observation fed to the networks.
    pub obs: [f64; OBS_DIM],
    /// Pre-clamp action sample in the unit cube.
    pub action: [f64; ACTION_DIM],
    /// Log-probability under the sample policy.
    pub log_prob: f64,
    pub reward: [f64; 3],
    pub value: [f64; 3],
    pub done: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RolloutBatch {
    pub transitions: Vec<Transition>,
    pub advantages: Vec<[f64; 3]>,
    pub value_targets: Vec<[f64; 3]>,
    pub episodes: Vec<EpisodeTotals>,
}

impl RolloutBatch {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

/// Runs one full episode per seed with the task's sample policy.
///
/// Observations are normalized with the sample policy's current scale; the
/// largest collected count seen is folded into both policies' scale after
/// the rollout.
pub fn collect_rollout<R: Rng + ?Sized>(
    task: &mut LearningTask,
    env: &mut UavMecEnv,
    episode_seeds: &[u64],
    gamma: f64,
    rng: &mut R,
) -> Result<RolloutBatch> {
    if episode_seeds.is_empty() {
        return Err(Error::Usage("a rollout needs at least one episode".into()));
    }
    let include_prop = env.config().include_propulsion_in_reward;
    let mut batch = RolloutBatch::default();
    let mut max_collected = 0;
    for &seed in episode_seeds {
        let mut obs = env.reset(seed);
        let mut log = Vec::with_capacity(env.config().slots);
        loop {
            max_collected = max_collected.max(obs.collected);
            let x = task.sample.io.normalize(&obs);
            let s = task.sample.sample(&x, rng)?;
            let value = task.value.predict(&x)?;
            let (next, reward, done, outcome) = env.step(s.action)?;
            batch.transitions.push(Transition {
                obs: x,
                action: s.raw,
                log_prob: s.log_prob,
                reward: reward.to_array(),
                value,
                done,
            });
            log.push(outcome);
            obs = next;
            if done {
                break;
            }
        }
        batch.episodes.push(episode_totals(&log, gamma, include_prop)?);
    }
    if !task.value.calibrated {
        calibrate_value_scale(task, &mut batch, gamma);
    }
    task.target.io.observe_collected(max_collected);
    task.sample.io.observe_collected(max_collected);
    Ok(batch)
}

/// Sets the value scale to the root-mean-square discounted reward-to-go of
/// the first batch and rescales the values already recorded in it.
fn calibrate_value_scale(task: &mut LearningTask, batch: &mut RolloutBatch, gamma: f64) {
    let mut sum_sq = [0.0; 3];
    let mut running = [0.0; 3];
    for tr in batch.transitions.iter().rev() {
        if tr.done {
            running = [0.0; 3];
        }
        for k in 0..3 {
            running[k] = tr.reward[k] + gamma * running[k];
            sum_sq[k] += running[k] * running[k];
        }
    }
    let n = batch.transitions.len().max(1) as f64;
    let old = task.value.scale;
    task.value.calibrate(sum_sq.map(|s| (s / n).sqrt()));
    let new = task.value.scale;
    for tr in &mut batch.transitions {
        for k in 0..3 {
            tr.value[k] *= new[k] / old[k];
        }
    }
}
