use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::archive::{update_ep, ArchiveEntry, EpArchive};
use super::eval::{evaluate_policy, PolicyEvaluation};
use super::lattice::generate_weight_lattice;
use super::population::{buffer_directions, select_tasks, update_population, Member, TaskPopulation};
use crate::metrics::write_front_csv;
use crate::mmppo::{mmppo, IterationStats, LearningTask, PpoConfig};
use crate::neural::ObsActionMap;
use crate::seed::{derive, label, rng_from};
use crate::sim::EnvFactory;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmorlConfig {
    pub g_max: usize,
    pub phi_warm: usize,
    pub phi_task: usize,
    pub delta: usize,
    pub p_num: usize,
    pub p_size: usize,
    pub e_eval: usize,
    pub ppo: PpoConfig,
}

impl Default for EmorlConfig {
    fn default() -> Self {
        Self { g_max: 100, phi_warm: 60, phi_task: 10, delta: 4, p_num: 200, p_size: 2, e_eval: 5, ppo: PpoConfig::default() }
    }
}

/// State after the warm-up (generation 0) or after generation `g`.
pub struct GenerationReport<'a> {
    pub generation: usize,
    pub archive: &'a EpArchive,
    pub population: &'a TaskPopulation,
    pub stats: &'a [IterationStats],
    pub offspring_total: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct EmorlResult {
    pub archive: EpArchive,
    pub population_size: usize,
    pub offspring_total: usize,
    pub elapsed: Duration,
}

/// Runs the full evolutionary loop: warm-up of `n` random tasks for
/// `phi_warm` iterations, then `g_max` generations of selection and
/// `phi_task` iterations of training. Offspring are evaluated on
/// `eval_seeds` and merged into the population and the archive after the
/// warm-up and after every generation; `observer` sees each of these states.
pub fn run_emorl(
    env: &EnvFactory,
    cfg: &EmorlConfig,
    seed: u64,
    eval_seeds: &[u64],
    observer: &mut dyn FnMut(&GenerationReport) -> Result<()>,
) -> Result<EmorlResult> {
    if cfg.phi_warm == 0 || cfg.phi_task == 0 {
        return Err(Error::Config("phi_warm and phi_task must be positive".into()));
    }
    if eval_seeds.is_empty() || eval_seeds.len() != cfg.e_eval {
        return Err(Error::Config(format!(
            "expected {} evaluation seeds, got {}",
            cfg.e_eval,
            eval_seeds.len()
        )));
    }
    env.cfg.validate()?;
    let start = Instant::now();
    let lattice = generate_weight_lattice(3, cfg.delta)?;
    let weights = lattice.triples()?;
    let mut pop = TaskPopulation::new(buffer_directions(cfg.p_num), cfg.p_size)?;
    let mut archive = EpArchive::default();
    let io = ObsActionMap::for_config(&env.cfg);
    let mut init_rng = rng_from(derive(seed, &[label("init")]));
    let mut tasks: Vec<LearningTask> =
        weights.iter().map(|w| LearningTask::new(*w, io, cfg.ppo.lr, &mut init_rng)).collect();
    let mut offspring_total = 0;
    for generation in 0..=cfg.g_max {
        if generation > 0 {
            tasks = select_tasks(&pop, &lattice)?;
        }
        let iterations = if generation == 0 { cfg.phi_warm } else { cfg.phi_task };
        let out = mmppo(tasks, iterations, env, &cfg.ppo, derive(seed, &[label("mmppo"), generation as u64]))?;
        if let Some((_, e)) = out.failures.into_iter().next() {
            return Err(e);
        }
        let evals = evaluate_all(&out.offspring, env, eval_seeds, cfg.ppo.gamma)?;
        let members: Vec<Member> = out
            .offspring
            .into_iter()
            .zip(evals)
            .enumerate()
            .map(|(k, (task, eval))| Member { id: (offspring_total + k) as u64, task, eval })
            .collect();
        offspring_total += members.len();
        update_ep(
            &mut archive,
            members.iter().map(|m| ArchiveEntry { id: m.id, policy: m.task.target.clone(), eval: m.eval }),
        );
        update_population(&mut pop, members);
        tasks = Vec::new();
        observer(&GenerationReport {
            generation,
            archive: &archive,
            population: &pop,
            stats: &out.stats,
            offspring_total,
            elapsed: start.elapsed(),
        })?;
    }
    Ok(EmorlResult { archive, population_size: pop.len(), offspring_total, elapsed: start.elapsed() })
}

fn evaluate_all(
    tasks: &[LearningTask],
    env: &EnvFactory,
    seeds: &[u64],
    gamma: f64,
) -> Result<Vec<PolicyEvaluation>> {
    tasks
        .par_iter()
        .map_init(|| env.build(), |built, t| match built {
            Ok(e) => evaluate_policy(&t.target, e, seeds, gamma),
            Err(e) => Err(Error::Config(e.to_string())),
        })
        .collect()
}

/// Persists one generation: `gen_NNNN/front.csv`, `gen_NNNN/manifest.json`
/// and any archive policy not yet stored under `policies/`.
pub fn write_checkpoint(dir: &Path, report: &GenerationReport, manifest: &serde_json::Value) -> Result<()> {
    let gen_dir = dir.join(format!("gen_{:04}", report.generation));
    let policy_dir = dir.join("policies");
    fs::create_dir_all(&gen_dir)?;
    fs::create_dir_all(&policy_dir)?;
    for e in &report.archive.entries {
        let path = policy_dir.join(format!("{}.json", e.policy_id()));
        if !path.exists() {
            fs::write(&path, e.policy.to_json()?)?;
        }
    }
    write_front_csv(&report.archive.front_rows(), fs::File::create(gen_dir.join("front.csv"))?)?;
    let body = serde_json::json!({
        "generation": report.generation,
        "archive_size": report.archive.len(),
        "population_size": report.population.len(),
        "offspring_total": report.offspring_total,
        "run": manifest,
    });
    fs::write(gen_dir.join("manifest.json"), serde_json::to_string_pretty(&body)?)?;
    Ok(())
}
