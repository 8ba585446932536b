use super::rollout::RolloutBatch;
use crate::{Error, Result};

/// Vector GAE over a sequence of transitions. `dones[t]` marks the last step
/// of an episode; no value is bootstrapped across it (terminal value zero).
pub fn gae(
    rewards: &[[f64; 3]],
    values: &[[f64; 3]],
    dones: &[bool],
    gamma: f64,
    lambda: f64,
) -> Result<Vec<[f64; 3]>> {
    if !(0.0..=1.0).contains(&gamma) || !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "gamma and lambda must lie in [0, 1], got {gamma} and {lambda}"
        )));
    }
    let n = rewards.len();
    if values.len() != n || dones.len() != n {
        return Err(Error::Dimension { expected: n, actual: values.len().min(dones.len()) });
    }
    let mut adv = vec![[0.0; 3]; n];
    let mut running = [0.0; 3];
    for t in (0..n).rev() {
        let terminal = dones[t] || t + 1 == n;
        let next = if terminal { [0.0; 3] } else { values[t + 1] };
        if terminal {
            running = [0.0; 3];
        }
        for k in 0..3 {
            let delta = rewards[t][k] + gamma * next[k] - values[t][k];
            running[k] = delta + gamma * lambda * running[k];
        }
        adv[t] = running;
    }
    Ok(adv)
}

/// Fills the batch's vector advantages and one-step value targets
/// `r_t + gamma * V(s_{t+1})`.
pub fn compute_gae(batch: &mut RolloutBatch, gamma: f64, lambda: f64) -> Result<()> {
    let rewards: Vec<[f64; 3]> = batch.transitions.iter().map(|t| t.reward).collect();
    let values: Vec<[f64; 3]> = batch.transitions.iter().map(|t| t.value).collect();
    let dones: Vec<bool> = batch.transitions.iter().map(|t| t.done).collect();
    batch.advantages = gae(&rewards, &values, &dones, gamma, lambda)?;
    let n = rewards.len();
    batch.value_targets = (0..n)
        .map(|t| {
            let terminal = dones[t] || t + 1 == n;
            let next = if terminal { [0.0; 3] } else { values[t + 1] };
            [0, 1, 2].map(|k| rewards[t][k] + gamma * next[k])
        })
        .collect();
    Ok(())
}

/// Weighted scalarization `w . A_t`.
pub fn extended_advantage(advantage: &[f64; 3], weight: &[f64; 3]) -> f64 {
    advantage.iter().zip(weight).map(|(a, w)| a * w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;
    use rand::Rng;

    /// O(T^2) double sum: A_t = sum_k (gamma lambda)^k delta_{t+k} within the episode.
    fn brute(r: &[[f64; 3]], v: &[[f64; 3]], g: f64, l: f64) -> Vec<[f64; 3]> {
        let n = r.len();
        let val = |t: usize| if t < n { v[t] } else { [0.0; 3] };
        (0..n)
            .map(|t| {
                let mut a = [0.0; 3];
                for k in 0..n - t {
                    for c in 0..3 {
                        let delta = r[t + k][c] + g * val(t + k + 1)[c] - v[t + k][c];
                        a[c] += (g * l).powi(k as i32) * delta;
                    }
                }
                a
            })
            .collect()
    }

    fn random_episode(rng: &mut impl Rng, n: usize) -> (Vec<[f64; 3]>, Vec<[f64; 3]>) {
        let r = (0..n).map(|_| [0; 3].map(|_| rng.random_range(-5.0..5.0))).collect();
        let v = (0..n).map(|_| [0; 3].map(|_| rng.random_range(-5.0..5.0))).collect();
        (r, v)
    }

    #[test]
    fn lambda_zero_is_td_residual() {
        let mut rng = rng_from(1);
        let (r, v) = random_episode(&mut rng, 6);
        let mut dones = vec![false; 6];
        dones[5] = true;
        let a = gae(&r, &v, &dones, 0.9, 0.0).unwrap();
        for t in 0..6 {
            let next = if t == 5 { [0.0; 3] } else { v[t + 1] };
            for k in 0..3 {
                assert!((a[t][k] - (r[t][k] + 0.9 * next[k] - v[t][k])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda_one_zero_values_is_reward_to_go() {
        let r = vec![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]];
        let v = vec![[0.0; 3]; 3];
        let a = gae(&r, &v, &[false, false, true], 0.5, 1.0).unwrap();
        assert_eq!(a[2], [7.0, 8.0, 9.0]);
        assert_eq!(a[1], [4.0 + 3.5, 5.0 + 4.0, 6.0 + 4.5]);
        assert_eq!(a[0], [1.0 + 0.5 * 7.5, 2.0 + 0.5 * 9.0, 3.0 + 0.5 * 10.5]);
    }

    #[test]
    fn matches_brute_force_and_respects_boundaries() {
        let mut rng = rng_from(2);
        for _ in 0..100 {
            let (r1, v1) = random_episode(&mut rng, 10);
            let (r2, v2) = random_episode(&mut rng, 10);
            let r: Vec<_> = r1.iter().chain(&r2).copied().collect();
            let v: Vec<_> = v1.iter().chain(&v2).copied().collect();
            let mut dones = vec![false; 20];
            dones[9] = true;
            dones[19] = true;
            let a = gae(&r, &v, &dones, 0.995, 0.95).unwrap();
            let expect: Vec<_> = brute(&r1, &v1, 0.995, 0.95).into_iter().chain(brute(&r2, &v2, 0.995, 0.95)).collect();
            for t in 0..20 {
                for k in 0..3 {
                    assert!((a[t][k] - expect[t][k]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(gae(&[], &[], &[], 1.5, 0.5).is_err());
        assert!(gae(&[], &[], &[], 0.5, -0.1).is_err());
    }

    #[test]
    fn extended_advantage_cases() {
        assert_eq!(extended_advantage(&[3.0, -1.0, 2.0], &[1.0, 0.0, 0.0]), 3.0);
        let third = 1.0 / 3.0;
        assert!((extended_advantage(&[3.0, -3.0, 3.0], &[third; 3]) - 1.0).abs() < 1e-15);
        let mut rng = rng_from(4);
        for _ in 0..50 {
            let a = [0; 3].map(|_| rng.random_range(-10.0..10.0));
            let w = [0; 3].map(|_| rng.random::<f64>());
            assert_eq!(extended_advantage(&a, &w), a[0] * w[0] + a[1] * w[1] + a[2] * w[2]);
        }
    }
}
