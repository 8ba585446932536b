//! Multi-task multi-objective PPO.
//!
//! Each learning task pairs a weight vector with a target policy, a sample
//! policy and a vector value network. One iteration collects episodes with
//! the sample policy, estimates vector advantages with GAE, scalarizes them
//! with the task's weight, takes clipped-surrogate steps on the target policy,
//! syncs the sample policy, and regresses the value net on one-step targets.

mod gae;
mod rollout;
mod task;
mod update;

pub use gae::{compute_gae, extended_advantage, gae};
pub use rollout::{collect_rollout, RolloutBatch, Transition};
pub use task::{LearningTask, PpoConfig};
pub use update::{
    ppo_update, surrogate_gradient, surrogate_objective, value_loss, value_loss_gradient,
    value_update, fit_regression_epoch, PolicyUpdateStats,
};

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::seed::{derive, rng_from};
use crate::sim::EnvFactory;
use crate::{Error, Result};

/// Per-iteration training statistics of one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub task: usize,
    pub iteration: usize,
    pub weight: [f64; 3],
    pub surrogate: f64,
    pub clip_fraction: f64,
    pub value_loss: f64,
    pub entropy: f64,
    /// Mean discounted return vector of the collected episodes.
    pub mean_return: [f64; 3],
}

/// Result of one MMPPO call.
#[derive(Debug, Default)]
pub struct MmppoOutput {
    /// Snapshot of every task after every iteration, in task-then-iteration order.
    pub offspring: Vec<LearningTask>,
    pub stats: Vec<IterationStats>,
    /// Tasks that failed, with the error. Their earlier snapshots are kept.
    pub failures: Vec<(usize, Error)>,
}

/// Runs `iterations` PPO iterations on every task.
///
/// Tasks are trained independently (in parallel when threads are
/// available). All randomness of task `i`, iteration `j`, episode `e` comes
/// from `derive(seed, [i, j, e])`, so the result does not depend on the
/// scheduling.
pub fn mmppo(
    tasks: Vec<LearningTask>,
    iterations: usize,
    env: &EnvFactory,
    cfg: &PpoConfig,
    seed: u64,
) -> Result<MmppoOutput> {
    if iterations == 0 {
        return Err(Error::Usage("MMPPO needs at least one iteration".into()));
    }
    let per_task: Vec<(Vec<LearningTask>, Vec<IterationStats>, Option<Error>)> = tasks
        .into_par_iter()
        .enumerate()
        .map(|(i, task)| train_task(i, task, iterations, env, cfg, seed))
        .collect();
    let mut out = MmppoOutput::default();
    for (i, (offspring, stats, err)) in per_task.into_iter().enumerate() {
        out.offspring.extend(offspring);
        out.stats.extend(stats);
        if let Some(e) = err {
            out.failures.push((i, e));
        }
    }
    Ok(out)
}

fn train_task(
    index: usize,
    mut task: LearningTask,
    iterations: usize,
    factory: &EnvFactory,
    cfg: &PpoConfig,
    seed: u64,
) -> (Vec<LearningTask>, Vec<IterationStats>, Option<Error>) {
    let mut offspring = Vec::with_capacity(iterations);
    let mut stats = Vec::with_capacity(iterations);
    let mut env = match factory.build() {
        Ok(env) => env,
        Err(e) => return (offspring, stats, Some(e)),
    };
    for it in 0..iterations {
        let base = derive(seed, &[index as u64, it as u64]);
        let episode_seeds: Vec<u64> =
            (0..cfg.episodes_per_iter as u64).map(|e| derive(base, &[e])).collect();
        let mut rng = rng_from(derive(base, &[u64::MAX]));
        let step = (|| -> Result<IterationStats> {
            let mut batch = collect_rollout(&mut task, &mut env, &episode_seeds, cfg.gamma, &mut rng)?;
            compute_gae(&mut batch, cfg.gamma, cfg.lambda)?;
            let pstats = ppo_update(&mut task, &batch, cfg, &mut rng)?;
            let losses = value_update(&mut task, &batch, cfg, &mut rng)?;
            let n = batch.episodes.len() as f64;
            let mut mean_return = [0.0; 3];
            for ep in &batch.episodes {
                for k in 0..3 {
                    mean_return[k] += ep.returns[k] / n;
                }
            }
            Ok(IterationStats {
                task: index,
                iteration: it,
                weight: task.weight,
                surrogate: pstats.surrogate,
                clip_fraction: pstats.clip_fraction,
                value_loss: losses.last().copied().unwrap_or(0.0),
                entropy: task.target.entropy(),
                mean_return,
            })
        })();
        match step {
            Ok(s) => {
                task.iterations += 1;
                stats.push(s);
                offspring.push(task.clone());
            }
            Err(e) => return (offspring, stats, Some(e)),
        }
    }
    (offspring, stats, None)
}

/// Appends iteration statistics as CSV rows; writes the header when `header` is set.
pub fn write_training_log<W: Write>(
    stats: &[IterationStats],
    generation: usize,
    header: bool,
    out: W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    if header {
        w.write_record([
            "generation", "task", "iteration", "w_D", "w_E", "w_N", "surrogate", "clip_fraction",
            "value_loss", "entropy", "return_D", "return_E", "return_N",
        ])?;
    }
    for s in stats {
        w.write_record(&[
            generation.to_string(),
            s.task.to_string(),
            s.iteration.to_string(),
            s.weight[0].to_string(),
            s.weight[1].to_string(),
            s.weight[2].to_string(),
            s.surrogate.to_string(),
            s.clip_fraction.to_string(),
            s.value_loss.to_string(),
            s.entropy.to_string(),
            s.mean_return[0].to_string(),
            s.mean_return[1].to_string(),
            s.mean_return[2].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
