use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::evolution::{evaluate_with, PolicyEvaluation};
use crate::metrics::FrontRow;
use crate::pareto::nondominated_indices;
use crate::sim::{ActionVector, EnvFactory, SimConfig, UavMecEnv};
use crate::{Error, Result};

/// Objectives the baselines select on. The reported vector is always the full
/// return triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveMode {
    #[default]
    Three,
    /// Delay and energy only.
    Two,
}

impl ObjectiveMode {
    pub fn project(self, f: &[f64; 3]) -> Vec<f64> {
        match self {
            ObjectiveMode::Three => f.to_vec(),
            ObjectiveMode::Two => vec![f[0], f[1]],
        }
    }

    pub fn count(self) -> usize {
        match self {
            ObjectiveMode::Three => 3,
            ObjectiveMode::Two => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub pop_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    /// Probability that an offspring undergoes mutation at all.
    pub mutation_prob: f64,
    pub eta_c: f64,
    /// MOEA/D neighborhood size.
    pub neighbors: usize,
    /// When set, generations continue until this much wall-clock time has
    /// passed, ignoring `generations`.
    pub time_budget: Option<Duration>,
    pub objectives: ObjectiveMode,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            pop_size: 100,
            generations: 100,
            crossover_prob: 0.8,
            mutation_prob: 0.3,
            eta_c: 15.0,
            neighbors: 10,
            time_budget: None,
            objectives: ObjectiveMode::Three,
        }
    }
}

impl GaConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::Config("population size must be at least 2".into()));
        }
        for (name, p) in [("crossover", self.crossover_prob), ("mutation", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} probability must lie in [0, 1]")));
            }
        }
        if self.eta_c < 0.0 {
            return Err(Error::Config("SBX distribution index must be nonnegative".into()));
        }
        Ok(())
    }

    pub(crate) fn keep_going(&self, generation: usize, started: std::time::Instant) -> bool {
        match self.time_budget {
            Some(b) => started.elapsed() < b,
            None => generation < self.generations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chromosome {
    pub genes: Vec<f64>,
    pub eval: PolicyEvaluation,
}

/// Decodes genes to one action per slot: theta = 2 pi g, d = d_max g, b = g.
pub fn decode(genes: &[f64], cfg: &SimConfig) -> Result<Vec<ActionVector>> {
    if genes.len() != 3 * cfg.slots {
        return Err(Error::Dimension { expected: 3 * cfg.slots, actual: genes.len() });
    }
    Ok(genes
        .chunks_exact(3)
        .map(|g| {
            let c = |v: f64| v.clamp(0.0, 1.0);
            ActionVector::new(c(g[0]) * std::f64::consts::TAU, c(g[1]) * cfg.d_max, c(g[2]))
        })
        .collect())
}

/// Replays the decoded action sequence on every seed.
pub fn evaluate_chromosome(
    genes: &[f64],
    env: &mut UavMecEnv,
    seeds: &[u64],
    gamma: f64,
) -> Result<PolicyEvaluation> {
    let actions = decode(genes, env.config())?;
    evaluate_with(env, seeds, gamma, |_, t| Ok(actions[t]))
}

pub(crate) fn evaluate_batch(
    genomes: Vec<Vec<f64>>,
    env: &EnvFactory,
    seeds: &[u64],
    gamma: f64,
) -> Result<Vec<Chromosome>> {
    genomes
        .into_par_iter()
        .map_init(|| env.build(), |built, genes| match built {
            Ok(e) => {
                let eval = evaluate_chromosome(&genes, e, seeds, gamma)?;
                Ok(Chromosome { genes, eval })
            }
            Err(e) => Err(Error::Config(e.to_string())),
        })
        .collect()
}

/// Final nondominated set of a baseline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaFront {
    pub members: Vec<Chromosome>,
    pub generations: usize,
    pub evaluations: usize,
}

impl GaFront {
    pub(crate) fn from_candidates(
        candidates: &[Chromosome],
        mode: ObjectiveMode,
        generations: usize,
        evaluations: usize,
    ) -> Self {
        let pts: Vec<Vec<f64>> = candidates.iter().map(|c| mode.project(&c.eval.returns)).collect();
        let members = nondominated_indices(&pts).into_iter().map(|i| candidates[i].clone()).collect();
        Self { members, generations, evaluations }
    }

    pub fn front_rows(&self) -> Vec<FrontRow> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, c)| FrontRow::new(format!("c{i:04}"), c.eval.returns, c.eval.raw))
            .collect()
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        self.members.iter().map(|c| c.eval.returns).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;
    use rand::Rng;

    fn env(slots: usize) -> UavMecEnv {
        let cfg = SimConfig { slots, num_devices: 4, area_x: 200.0, area_y: 200.0, ..Default::default() };
        UavMecEnv::new(cfg, 21).unwrap()
    }

    #[test]
    fn all_zero_genes_hover_without_offloading() {
        let mut e = env(6);
        let actions = decode(&[0.0; 18], e.config()).unwrap();
        assert!(actions.iter().all(|a| a.theta == 0.0 && a.d == 0.0 && a.b == 0.0));
        let start = e.reset(3);
        for a in &actions {
            let (obs, _, _, o) = e.step(*a).unwrap();
            assert_eq!(o.offloaded, 0);
            assert_eq!((obs.x, obs.y), (start.x, start.y));
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let mut e = env(5);
        assert!(matches!(
            evaluate_chromosome(&[0.5; 14], &mut e, &[1], 0.9),
            Err(Error::Dimension { expected: 15, actual: 14 })
        ));
    }

    #[test]
    fn replay_matches_manual_trace() {
        let mut e = env(5);
        let mut rng = rng_from(4);
        let genes: Vec<f64> = (0..15).map(|_| rng.random::<f64>()).collect();
        let a = evaluate_chromosome(&genes, &mut e, &[7], 1.0).unwrap();
        assert_eq!(a, evaluate_chromosome(&genes, &mut e, &[7], 1.0).unwrap());
        let mut e2 = env(5);
        e2.reset(7);
        let mut ret = [0.0; 3];
        for g in genes.chunks(3) {
            let act = ActionVector::new(g[0] * std::f64::consts::TAU, g[1] * e2.config().d_max, g[2]);
            let (_, r, _, _) = e2.step(act).unwrap();
            let r = r.to_array();
            for k in 0..3 {
                ret[k] += r[k];
            }
        }
        for k in 0..3 {
            assert!((a.returns[k] - ret[k]).abs() < 1e-9 * (1.0 + ret[k].abs()));
        }
    }
}
