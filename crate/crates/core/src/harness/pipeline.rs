use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::instances::{desk_scale_preset, find_instance, InstanceSpec};
use super::manifest::{Algorithm, RunManifest, VERSION};
use crate::baselines::{moead_run, nsga2_run, GaConfig};
use crate::evolution::{generate_weight_lattice, run_emorl, write_checkpoint, EmorlConfig};
use crate::metrics::{
    build_reference_front, coi_family, hv3, igd, normalize_fronts, read_front_csv, write_front_csv,
    write_report_csv, write_report_json, CoiMode, FrontMatrix, MetricsRow,
};
use crate::mmppo::write_training_log;
use crate::neural::GaussianPolicy;
use crate::seed::SeedPlan;
use crate::sim::{episode_totals, write_episode_csv, EnvFactory, EpisodeTotals, SimConfig};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub algorithm: Algorithm,
    pub instance: String,
    pub seed: u64,
    /// Base world configuration; the instance's K and H are applied on top.
    pub config: Option<SimConfig>,
    pub out: PathBuf,
    pub desk_scale: bool,
    pub emorl: Option<EmorlConfig>,
    pub ga: Option<GaConfig>,
}

impl TrainOptions {
    pub fn new(algorithm: Algorithm, instance: &str, seed: u64, out: impl Into<PathBuf>) -> Self {
        Self {
            algorithm,
            instance: instance.to_string(),
            seed,
            config: None,
            out: out.into(),
            desk_scale: false,
            emorl: None,
            ga: None,
        }
    }
}

struct Resolved {
    spec: InstanceSpec,
    sim: SimConfig,
    emorl: EmorlConfig,
    plan: SeedPlan,
}

fn resolve(instance: &str, seed: u64, config: Option<&SimConfig>, desk: bool, emorl: Option<&EmorlConfig>) -> Result<Resolved> {
    let spec = find_instance(instance)?;
    let mut sim = spec.apply(&config.cloned().unwrap_or_default());
    let mut emorl = emorl.cloned().unwrap_or_default();
    if desk {
        desk_scale_preset().apply(&mut sim, &mut emorl);
    }
    sim.validate()?;
    Ok(Resolved { spec, sim, emorl, plan: SeedPlan::new(seed) })
}

/// Trains one algorithm on one instance and writes `front.csv`,
/// `manifest.json` and, for EMORL, per-generation checkpoints, policy blobs
/// and `training_log.csv` under `opts.out`.
pub fn train(opts: &TrainOptions) -> Result<RunManifest> {
    let r = resolve(&opts.instance, opts.seed, opts.config.as_ref(), opts.desk_scale, opts.emorl.as_ref())?;
    let started = Instant::now();
    let instance_seed = r.plan.instance_seed(&r.spec.name);
    let eval_seeds = r.plan.eval_seeds(r.emorl.e_eval);
    let training_seed = r.plan.stream(opts.algorithm.name(), &[]);
    let factory = EnvFactory::new(r.sim.clone(), instance_seed);
    fs::create_dir_all(&opts.out)?;
    let mut manifest = RunManifest {
        algorithm: opts.algorithm,
        instance: r.spec.clone(),
        desk_scale: opts.desk_scale,
        sim: r.sim.clone(),
        emorl: None,
        ga: None,
        master_seed: opts.seed,
        instance_seed,
        training_seed,
        eval_seeds: eval_seeds.clone(),
        version: VERSION.to_string(),
        wall_clock_secs: 0.0,
        outputs: vec!["front.csv".into(), "manifest.json".into()],
    };
    let rows = match opts.algorithm {
        Algorithm::Emorl => {
            manifest.emorl = Some(r.emorl.clone());
            let log_path = opts.out.join("training_log.csv");
            File::create(&log_path)?;
            let stamp = serde_json::to_value(&manifest)?;
            let res = run_emorl(&factory, &r.emorl, training_seed, &eval_seeds, &mut |report| {
                let log = OpenOptions::new().append(true).open(&log_path)?;
                write_training_log(report.stats, report.generation, report.generation == 0, log)?;
                write_checkpoint(&opts.out, report, &stamp)
            })?;
            manifest.outputs.extend(["training_log.csv".into(), "policies/".into(), "gen_NNNN/".into()]);
            res.archive.front_rows()
        }
        Algorithm::Nsga2 | Algorithm::Moead => {
            let ga = opts.ga.clone().unwrap_or_default();
            manifest.ga = Some(ga.clone());
            let gamma = r.emorl.ppo.gamma;
            let front = if opts.algorithm == Algorithm::Nsga2 {
                nsga2_run(&factory, &ga, training_seed, &eval_seeds, gamma)?
            } else {
                moead_run(&factory, &ga, training_seed, &eval_seeds, gamma)?
            };
            front.front_rows()
        }
    };
    write_front_csv(&rows, File::create(opts.out.join("front.csv"))?)?;
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    manifest.write(&opts.out.join("manifest.json"))?;
    Ok(manifest)
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub instance: String,
    /// (algorithm label, front CSV path).
    pub fronts: Vec<(String, PathBuf)>,
    /// Spacing of the weight lattice used by the COI family.
    pub delta: usize,
    pub coi_mode: CoiMode,
    /// Directory receiving `report.csv` and `summary.json`; nothing is written when `None`.
    pub out: Option<PathBuf>,
}

/// Scores fronts of one instance against each other: normalization over
/// their union, IGD against the union's nondominated set, HV at the origin
/// of the normalized space, and the COI family on the unnormalized fronts.
pub fn eval_fronts(opts: &EvalOptions) -> Result<Vec<MetricsRow>> {
    if opts.fronts.is_empty() {
        return Err(Error::Usage("eval needs at least one front".into()));
    }
    let mut fronts = Vec::with_capacity(opts.fronts.len());
    for (label, path) in &opts.fronts {
        let rows = read_front_csv(File::open(path).map_err(|e| {
            Error::Usage(format!("cannot open front {} for {label}: {e}", path.display()))
        })?)?;
        if rows.is_empty() {
            return Err(Error::Format(format!("front {} is empty", path.display())));
        }
        fronts.push(FrontMatrix::from_rows(&rows)?);
    }
    let (normalized, _) = normalize_fronts(&fronts)?;
    let reference = build_reference_front(&normalized)?;
    let weights = generate_weight_lattice(3, opts.delta)?.triples()?;
    let mut out = Vec::with_capacity(fronts.len());
    for (((label, _), raw), norm) in opts.fronts.iter().zip(&fronts).zip(&normalized) {
        let coi = coi_family(raw, &weights, opts.coi_mode)?;
        out.push(MetricsRow {
            instance: opts.instance.clone(),
            algorithm: label.clone(),
            front_size: raw.len(),
            igd: igd(&reference, norm)?,
            hv: hv3(&norm.points, [0.0; 3]),
            atd: coi.atd,
            aec: coi.aec,
            atn: coi.atn,
            acoi: coi.acoi,
        });
    }
    if let Some(dir) = &opts.out {
        fs::create_dir_all(dir)?;
        write_report_csv(&out, File::create(dir.join("report.csv"))?)?;
        write_report_json(&out, File::create(dir.join("summary.json"))?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ReplayOptions {
    pub policy: PathBuf,
    pub instance: String,
    pub seed: u64,
    pub config: Option<SimConfig>,
    pub desk_scale: bool,
    /// Episode seed; defaults to the first evaluation seed of the master seed.
    pub episode_seed: Option<u64>,
    pub out: PathBuf,
}

/// Runs a stored policy deterministically for one episode and writes the
/// per-slot trajectory CSV.
pub fn replay_policy(opts: &ReplayOptions) -> Result<EpisodeTotals> {
    let r = resolve(&opts.instance, opts.seed, opts.config.as_ref(), opts.desk_scale, None)?;
    let text = fs::read_to_string(&opts.policy)
        .map_err(|e| Error::Usage(format!("cannot read policy {}: {e}", opts.policy.display())))?;
    let policy = GaussianPolicy::from_json(&text)?;
    let mut env = EnvFactory::new(r.sim.clone(), r.plan.instance_seed(&r.spec.name)).build()?;
    let seed = opts.episode_seed.unwrap_or_else(|| r.plan.eval_seeds(1)[0]);
    let mut obs = env.reset(seed);
    let mut log = Vec::with_capacity(r.sim.slots);
    loop {
        let (next, _, done, outcome) = env.step(policy.act_deterministic(&obs)?)?;
        log.push(outcome);
        obs = next;
        if done {
            break;
        }
    }
    if let Some(parent) = opts.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    write_episode_csv(&log, File::create(&opts.out)?)?;
    episode_totals(&log, r.emorl.ppo.gamma, r.sim.include_propulsion_in_reward)
}

/// Path of the blob for `policy_id` inside an EMORL output directory.
pub fn policy_path(run_dir: &Path, policy_id: &str) -> PathBuf {
    run_dir.join("policies").join(format!("{policy_id}.json"))
}
