use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tcto_core::harness::{
    eval_fronts, standard_instances, replay_policy, train, Algorithm, EvalOptions, ReplayOptions,
    TrainOptions,
};
use tcto_core::metrics::CoiMode;
use tcto_core::sim::SimConfig;
use tcto_core::Error;

#[derive(Parser)]
#[command(name = "tcto", version, about = "UAV-assisted MEC trajectory control and offloading benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one algorithm on one instance.
    Train(TrainArgs),
    /// Score front CSVs of one instance against each other.
    Eval(EvalArgs),
    /// Print the instance table as JSON.
    Instances,
    /// Run a stored policy for one episode and write its trajectory CSV.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Emorl,
    Nsga2,
    Moead,
}

#[derive(Args)]
struct WorldArgs {
    /// Base world configuration (JSON); instance K and H are applied on top.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    instance: String,
    /// Apply the reduced desk-scale preset.
    #[arg(long)]
    desk_scale: bool,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    world: WorldArgs,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    instance: String,
    /// Front to score, as LABEL=PATH; repeat for every algorithm.
    #[arg(long = "front", required = true)]
    fronts: Vec<String>,
    /// Weight lattice spacing for the COI family.
    #[arg(long, default_value_t = 4)]
    delta: usize,
    /// Score the COI family on raw totals instead of returns.
    #[arg(long)]
    raw_coi: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    #[command(flatten)]
    world: WorldArgs,
    #[arg(long)]
    policy: PathBuf,
    #[arg(long)]
    episode_seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

fn load_config(path: &Option<PathBuf>) -> Result<Option<SimConfig>, Error> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", p.display())))?;
            SimConfig::from_json(&text).map(Some)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Train(a) => {
            let algorithm = match a.algo {
                Algo::Emorl => Algorithm::Emorl,
                Algo::Nsga2 => Algorithm::Nsga2,
                Algo::Moead => Algorithm::Moead,
            };
            let mut opts = TrainOptions::new(algorithm, &a.world.instance, a.world.seed, a.out);
            opts.config = load_config(&a.world.config)?;
            opts.desk_scale = a.world.desk_scale;
            let m = train(&opts)?;
            eprintln!("{} on {}: done in {:.1} s", m.algorithm.name(), m.instance.name, m.wall_clock_secs);
        }
        Command::Eval(a) => {
            let fronts = a
                .fronts
                .iter()
                .map(|f| {
                    f.split_once('=')
                        .map(|(l, p)| (l.to_string(), PathBuf::from(p)))
                        .ok_or_else(|| Error::Usage(format!("front {f:?} is not LABEL=PATH")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let rows = eval_fronts(&EvalOptions {
                instance: a.instance,
                fronts,
                delta: a.delta,
                coi_mode: if a.raw_coi { CoiMode::Raw } else { CoiMode::Returns },
                out: a.out,
            })?;
            println!("algorithm,front_size,igd,hv,atd,aec,atn,acoi");
            for r in rows {
                println!("{},{},{},{},{},{},{},{}", r.algorithm, r.front_size, r.igd, r.hv, r.atd, r.aec, r.atn, r.acoi);
            }
        }
        Command::Instances => {
            println!("{}", serde_json::to_string_pretty(&standard_instances())?);
        }
        Command::Replay(a) => {
            let totals = replay_policy(&ReplayOptions {
                policy: a.policy,
                instance: a.world.instance,
                seed: a.world.seed,
                config: load_config(&a.world.config)?,
                desk_scale: a.world.desk_scale,
                episode_seed: a.episode_seed,
                out: a.out,
            })?;
            println!("{}", serde_json::to_string(&totals)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
