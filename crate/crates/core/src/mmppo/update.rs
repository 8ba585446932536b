use rand::seq::SliceRandom;
use rand::Rng;

use super::gae::extended_advantage;
use super::rollout::{RolloutBatch, Transition};
use super::task::{LearningTask, PpoConfig};
use crate::neural::{AdamState, GaussianPolicy, Mlp, ACTION_DIM};
use crate::{Error, Result};

/// Summary of one policy update.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolicyUpdateStats {
    /// Mean clipped surrogate over all minibatch evaluations.
    pub surrogate: f64,
    /// Fraction of samples whose ratio left the clip interval.
    pub clip_fraction: f64,
    pub steps: usize,
}

/// Gradient of the clipped surrogate with respect to the mean network and the log-std.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateGradient {
    pub objective: f64,
    pub mean: Vec<f64>,
    pub log_std: [f64; ACTION_DIM],
    pub clip_fraction: f64,
}

fn clipped_term(ratio: f64, adv: f64, eps: f64) -> (f64, bool) {
    let clipped = ratio.clamp(1.0 - eps, 1.0 + eps);
    let unclipped = ratio * adv;
    let other = clipped * adv;
    if unclipped <= other {
        (unclipped, true)
    } else {
        (other, false)
    }
}

/// Mean clipped surrogate `min(r A, clip(r, 1-eps, 1+eps) A)` over the items,
/// where `r` is the ratio of `policy` to the behavior log-probability stored in the transition.
pub fn surrogate_objective(
    policy: &GaussianPolicy,
    items: &[(&Transition, f64)],
    eps: f64,
) -> Result<f64> {
    if items.is_empty() {
        return Err(Error::Empty("surrogate minibatch"));
    }
    let mut total = 0.0;
    for (tr, adv) in items {
        let ratio = (policy.log_prob(&tr.obs, &tr.action)? - tr.log_prob).exp();
        total += clipped_term(ratio, *adv, eps).0;
    }
    Ok(total / items.len() as f64)
}

/// Analytic gradient of [`surrogate_objective`]. Samples on the clipped
/// branch contribute nothing.
pub fn surrogate_gradient(
    policy: &GaussianPolicy,
    items: &[(&Transition, f64)],
    eps: f64,
) -> Result<SurrogateGradient> {
    if items.is_empty() {
        return Err(Error::Empty("surrogate minibatch"));
    }
    let n = items.len() as f64;
    let mut g = SurrogateGradient {
        objective: 0.0,
        mean: vec![0.0; policy.mean.num_params()],
        log_std: [0.0; ACTION_DIM],
        clip_fraction: 0.0,
    };
    for (tr, adv) in items {
        let ratio = (policy.log_prob(&tr.obs, &tr.action)? - tr.log_prob).exp();
        let (term, active) = clipped_term(ratio, *adv, eps);
        g.objective += term / n;
        if (ratio - 1.0).abs() > eps {
            g.clip_fraction += 1.0 / n;
        }
        if active && *adv != 0.0 {
            policy.accumulate_log_prob_grad(
                &tr.obs,
                &tr.action,
                adv * ratio / n,
                &mut g.mean,
                &mut g.log_std,
            )?;
        }
    }
    Ok(g)
}

/// Mean squared error `mean_i ||net(x_i) - y_i||^2`.
pub fn value_loss(net: &Mlp, samples: &[(&[f64], &[f64])]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("regression minibatch"));
    }
    let mut total = 0.0;
    for (x, y) in samples {
        let out = net.forward(x)?;
        if y.len() != out.len() {
            return Err(Error::Dimension { expected: out.len(), actual: y.len() });
        }
        total += out.iter().zip(*y).map(|(o, t)| (o - t) * (o - t)).sum::<f64>();
    }
    Ok(total / samples.len() as f64)
}

/// Loss and parameter gradient of [`value_loss`].
pub fn value_loss_gradient(net: &Mlp, samples: &[(&[f64], &[f64])]) -> Result<(f64, Vec<f64>)> {
    if samples.is_empty() {
        return Err(Error::Empty("regression minibatch"));
    }
    let n = samples.len() as f64;
    let mut grads = vec![0.0; net.num_params()];
    let mut total = 0.0;
    for (x, y) in samples {
        let cache = net.forward_cached(x)?;
        let out = cache.output();
        if y.len() != out.len() {
            return Err(Error::Dimension { expected: out.len(), actual: y.len() });
        }
        let upstream: Vec<f64> = out.iter().zip(*y).map(|(o, t)| 2.0 * (o - t) / n).collect();
        total += out.iter().zip(*y).map(|(o, t)| (o - t) * (o - t)).sum::<f64>();
        net.backward_into(&cache, &upstream, &mut grads)?;
    }
    Ok((total / n, grads))
}

fn clip_norm(grads: &mut [f64], extra: &mut [f64], max: Option<f64>) {
    if let Some(max) = max {
        let norm = grads.iter().chain(extra.iter()).map(|g| g * g).sum::<f64>().sqrt();
        if norm > max && norm > 0.0 {
            let s = max / norm;
            grads.iter_mut().chain(extra.iter_mut()).for_each(|g| *g *= s);
        }
    }
}

/// One shuffled pass of minibatch Adam steps on the squared error. Returns
/// the mean minibatch loss before each step.
pub fn fit_regression_epoch<R: Rng + ?Sized>(
    net: &mut Mlp,
    adam: &mut AdamState,
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
    minibatch: usize,
    max_grad_norm: Option<f64>,
    rng: &mut R,
) -> Result<f64> {
    if inputs.len() != targets.len() {
        return Err(Error::Dimension { expected: inputs.len(), actual: targets.len() });
    }
    if inputs.is_empty() {
        return Err(Error::Empty("regression data"));
    }
    if minibatch == 0 {
        return Err(Error::Config("minibatch size must be positive".into()));
    }
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    order.shuffle(rng);
    let mut loss_sum = 0.0;
    let mut count = 0;
    for chunk in order.chunks(minibatch) {
        let samples: Vec<(&[f64], &[f64])> =
            chunk.iter().map(|&i| (inputs[i].as_slice(), targets[i].as_slice())).collect();
        let (loss, mut grads) = value_loss_gradient(net, &samples)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite("value loss"));
        }
        clip_norm(&mut grads, &mut [], max_grad_norm);
        adam.step(net.params_mut(), &grads)?;
        loss_sum += loss;
        count += 1;
    }
    Ok(loss_sum / count as f64)
}

/// Clipped-surrogate ascent on the target policy followed by a sync of the
/// sample policy. On a non-finite loss or gradient the target policy and its
/// optimizer state are restored and the error is returned.
pub fn ppo_update<R: Rng + ?Sized>(
    task: &mut LearningTask,
    batch: &RolloutBatch,
    cfg: &PpoConfig,
    rng: &mut R,
) -> Result<PolicyUpdateStats> {
    let n = batch.len();
    if n == 0 {
        return Err(Error::Empty("rollout batch"));
    }
    if batch.advantages.len() != n {
        return Err(Error::Usage("advantages must be computed before the policy update".into()));
    }
    if cfg.minibatch == 0 {
        return Err(Error::Config("minibatch size must be positive".into()));
    }
    let mut adv: Vec<f64> =
        batch.advantages.iter().map(|a| extended_advantage(a, &task.weight)).collect();
    if cfg.standardize_advantages {
        let mean = adv.iter().sum::<f64>() / n as f64;
        let var = adv.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        adv.iter_mut().for_each(|a| {
            *a -= mean;
            if std > 1e-12 {
                *a /= std;
            }
        });
    }
    let backup = (task.target.clone(), task.policy_adam.clone(), task.log_std_adam.clone());
    let result = run_policy_epochs(task, batch, &adv, cfg, rng);
    match result {
        Ok(stats) => {
            task.sample = task.target.clone();
            Ok(stats)
        }
        Err(e) => {
            task.target = backup.0;
            task.policy_adam = backup.1;
            task.log_std_adam = backup.2;
            Err(e)
        }
    }
}

fn run_policy_epochs<R: Rng + ?Sized>(
    task: &mut LearningTask,
    batch: &RolloutBatch,
    adv: &[f64],
    cfg: &PpoConfig,
    rng: &mut R,
) -> Result<PolicyUpdateStats> {
    let mut stats = PolicyUpdateStats::default();
    let mut order: Vec<usize> = (0..batch.len()).collect();
    for _ in 0..cfg.epochs {
        order.shuffle(rng);
        for chunk in order.chunks(cfg.minibatch) {
            let items: Vec<(&Transition, f64)> =
                chunk.iter().map(|&i| (&batch.transitions[i], adv[i])).collect();
            let g = surrogate_gradient(&task.target, &items, cfg.clip_eps)?;
            if !g.objective.is_finite() {
                return Err(Error::NonFinite("surrogate objective"));
            }
            let mut mean_grads: Vec<f64> = g.mean.iter().map(|v| -v).collect();
            let mut ls_grads = g.log_std.map(|v| -v - cfg.entropy_coef);
            clip_norm(&mut mean_grads, &mut ls_grads, cfg.max_grad_norm);
            task.policy_adam.step(task.target.mean.params_mut(), &mean_grads)?;
            let mut log_std = task.target.log_std();
            task.log_std_adam.step(&mut log_std, &ls_grads)?;
            task.target.set_log_std(log_std);
            stats.surrogate += g.objective;
            stats.clip_fraction += g.clip_fraction;
            stats.steps += 1;
        }
    }
    if stats.steps > 0 {
        stats.surrogate /= stats.steps as f64;
        stats.clip_fraction /= stats.steps as f64;
    }
    Ok(stats)
}

/// Regresses the vector value net on the batch's one-step targets, in the
/// net's scaled units. Returns the mean loss of every epoch.
pub fn value_update<R: Rng + ?Sized>(
    task: &mut LearningTask,
    batch: &RolloutBatch,
    cfg: &PpoConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if batch.value_targets.len() != batch.len() {
        return Err(Error::Usage("value targets must be computed before the value update".into()));
    }
    let inputs: Vec<Vec<f64>> = batch.transitions.iter().map(|t| t.obs.to_vec()).collect();
    let scale = task.value.scale;
    let targets: Vec<Vec<f64>> =
        batch.value_targets.iter().map(|t| (0..3).map(|k| t[k] / scale[k]).collect()).collect();
    let backup = (task.value.clone(), task.value_adam.clone());
    let mut losses = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        match fit_regression_epoch(
            &mut task.value.net,
            &mut task.value_adam,
            &inputs,
            &targets,
            cfg.minibatch,
            cfg.max_grad_norm,
            rng,
        ) {
            Ok(l) => losses.push(l),
            Err(e) => {
                task.value = backup.0;
                task.value_adam = backup.1;
                return Err(e);
            }
        }
    }
    Ok(losses)
}
