use serde::{Deserialize, Serialize};

use crate::neural::GaussianPolicy;
use crate::sim::{episode_totals, ActionVector, Observation, UavMecEnv};
use crate::{Error, Objectives, Result};

/// Mean return vector and mean raw totals over the evaluation episodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyEvaluation {
    /// (R^D, R^E, R^N), all maximized.
    pub returns: Objectives,
    /// (D_total, E_total, N_total).
    pub raw: [f64; 3],
}

/// Runs one episode per seed, choosing actions with `act(obs, slot)` where
/// `slot` counts from zero.
pub fn evaluate_with<F>(env: &mut UavMecEnv, seeds: &[u64], gamma: f64, mut act: F) -> Result<PolicyEvaluation>
where
    F: FnMut(&Observation, usize) -> Result<ActionVector>,
{
    if seeds.is_empty() {
        return Err(Error::Usage("evaluation needs at least one episode".into()));
    }
    let include_prop = env.config().include_propulsion_in_reward;
    let n = seeds.len() as f64;
    let mut e = PolicyEvaluation { returns: [0.0; 3], raw: [0.0; 3] };
    for &seed in seeds {
        let mut obs = env.reset(seed);
        let mut log = Vec::with_capacity(env.config().slots);
        for slot in 0.. {
            let a = act(&obs, slot)?;
            let (next, _, done, outcome) = env.step(a)?;
            log.push(outcome);
            obs = next;
            if done {
                break;
            }
        }
        let totals = episode_totals(&log, gamma, include_prop)?;
        let raw = totals.raw();
        for k in 0..3 {
            e.returns[k] += totals.returns[k] / n;
            e.raw[k] += raw[k] / n;
        }
    }
    if e.returns.iter().chain(&e.raw).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("policy evaluation"));
    }
    Ok(e)
}

/// Deterministic (mean-action) evaluation of a policy.
pub fn evaluate_policy(
    policy: &GaussianPolicy,
    env: &mut UavMecEnv,
    seeds: &[u64],
    gamma: f64,
) -> Result<PolicyEvaluation> {
    evaluate_with(env, seeds, gamma, |obs, _| policy.act_deterministic(obs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::ObsActionMap;
    use crate::seed::rng_from;
    use crate::sim::SimConfig;

    fn env() -> UavMecEnv {
        let cfg = SimConfig { slots: 10, num_devices: 4, area_x: 200.0, area_y: 200.0, ..Default::default() };
        UavMecEnv::new(cfg, 5).unwrap()
    }

    #[test]
    fn identical_seeds_identical_evaluation() {
        let mut e = env();
        let p = GaussianPolicy::new(ObsActionMap::for_config(e.config()), &mut rng_from(1));
        let a = evaluate_policy(&p, &mut e, &[1, 2, 3], 0.995).unwrap();
        let b = evaluate_policy(&p, &mut e, &[1, 2, 3], 0.995).unwrap();
        assert_eq!(a, b);
        assert!(evaluate_policy(&p, &mut e, &[], 0.995).is_err());
    }

    #[test]
    fn undiscounted_in_bounds_returns_match_totals() {
        let cfg = SimConfig { include_propulsion_in_reward: false, ..env().config().clone() };
        let mut e = UavMecEnv::new(cfg, 5).unwrap();
        // hovering never leaves the area
        let eval = evaluate_with(&mut e, &[4, 9], 1.0, |_, _| Ok(ActionVector::new(0.0, 0.0, 0.6))).unwrap();
        assert!((eval.returns[0] + eval.raw[0]).abs() < 1e-9);
        assert!((eval.returns[2] - eval.raw[2]).abs() < 1e-9);
        // hover power is part of the raw energy but not of the reward
        assert!(-eval.returns[1] * 100.0 < eval.raw[1]);
    }

    #[test]
    fn matches_hand_stepped_trace() {
        let mut e = env();
        let mut rng = rng_from(8);
        let actions: Vec<ActionVector> = (0..10)
            .map(|_| {
                use rand::Rng;
                ActionVector::new(rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(0.0..20.0), rng.random::<f64>())
            })
            .collect();
        let eval = evaluate_with(&mut e, &[11], 0.9, |_, t| Ok(actions[t])).unwrap();
        let mut e2 = env();
        e2.reset(11);
        let (mut ret, mut d, mut n, mut disc) = ([0.0; 3], 0.0, 0.0, 1.0);
        for a in &actions {
            let (_, r, _, o) = e2.step(*a).unwrap();
            let r = r.to_array();
            for k in 0..3 {
                ret[k] += disc * r[k];
            }
            d += o.delay;
            n += o.collected as f64;
            disc *= 0.9;
        }
        for k in 0..3 {
            assert!((eval.returns[k] - ret[k]).abs() < 1e-9 * (1.0 + ret[k].abs()));
        }
        assert_eq!(eval.raw[0], d);
        assert_eq!(eval.raw[2], n);
    }
}
