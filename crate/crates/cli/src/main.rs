use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use laml_core::baselines::EXHAUSTIVE_MAX_SENSORS;
use laml_core::sweep::{write_csv, CustomSweep};
use laml_core::{
    exhaustive_max_disjoint_covers, greedy_msc_schedule, lifetime_upper_bound, run_trials, Algorithm,
    Deployment, Error, ExperimentConfig, Preset, ScenarioFile, SweepSpec,
};

#[derive(Parser)]
#[command(name = "laml", version, about = "Learning-automata target coverage scheduling experiments")]
struct Cli {
    /// Worker threads for independent trials. Output does not depend on it.
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run `trials` simulations of one configuration and emit a summary row.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's master_seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        algorithm: Option<AlgorithmArg>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named preset (fig3a, fig3b, fig4a, fig4b, fig5a, fig5b, fig6) or
    /// a custom grid file.
    Sweep {
        #[arg(long)]
        preset: String,
        /// Grid file for `--preset custom`.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Directory for `<preset>.csv`; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        master_seed: Option<u64>,
        /// Charge LAML its radio traffic (0 keeps communication free).
        #[arg(long)]
        comm_scale: Option<f64>,
    },
    /// Lifetime bounds for a fixed scenario file.
    Oracle {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        battery: f64,
        #[arg(long, default_value_t = 1.0)]
        sense_rate: f64,
        /// Greedy-MSC slice length.
        #[arg(long, default_value_t = 0.2)]
        psi: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Laml,
    Greedy,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Laml => Algorithm::Laml,
            AlgorithmArg::Greedy => Algorithm::GreedyMsc,
        }
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct ConfigProblem(String);

impl std::fmt::Display for ConfigProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigProblem {}

fn config_problem(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(ConfigProblem(format!("{:#}", e.into())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(config_problem)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).map_err(config_problem)
}

fn lift(e: Error) -> anyhow::Error {
    match e {
        Error::ConfigInvalid(_) | Error::UnknownPreset(_) | Error::Deployment(_) => config_problem(e),
        other => other.into(),
    }
}

fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let mut file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            body(&mut file)
        }
        None => body(&mut io::stdout().lock()),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Run { config, seed, algorithm, out } => {
            let mut cfg: ExperimentConfig = read_json(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(a) = algorithm {
                cfg.algorithm = a.into();
            }
            cfg.validate().map_err(config_problem)?;
            let row = run_trials(&cfg, "run", jobs).map_err(lift)?;
            emit(out.as_deref(), |w| write_csv(std::slice::from_ref(&row), w).map_err(Into::into))
        }
        Command::Sweep { preset, grid, out, trials, master_seed, comm_scale } => {
            let spec = if preset == "custom" {
                let path = grid.ok_or_else(|| config_problem(anyhow!("--preset custom needs --grid <file>")))?;
                let mut custom: CustomSweep = read_json(&path)?;
                apply_overrides(&mut custom.base, trials, master_seed, comm_scale);
                SweepSpec::Custom(custom)
            } else {
                SweepSpec::Preset(preset.parse::<Preset>().map_err(lift)?)
            };
            let mut base = ExperimentConfig::default();
            apply_overrides(&mut base, trials, master_seed, comm_scale);
            let rows = laml_core::sweep(&spec, &base, jobs).map_err(lift)?;
            let path = match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    Some(dir.join(format!("{}.csv", spec.label())))
                }
                None => None,
            };
            emit(path.as_deref(), |w| write_csv(&rows, w).map_err(Into::into))
        }
        Command::Oracle { scenario, battery, sense_rate, psi } => {
            let file: ScenarioFile = read_json(&scenario)?;
            let d: Deployment = file.to_deployment().map_err(config_problem)?;
            if !(battery > 0.0 && sense_rate > 0.0 && psi > 0.0) {
                return Err(config_problem(anyhow!("battery, sense-rate and psi must be positive")));
            }
            let batteries = vec![battery; d.n_sensors()];
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "sensors={}", d.n_sensors())?;
            writeln!(stdout, "targets={}", d.n_targets())?;
            writeln!(stdout, "upper_bound={}", lifetime_upper_bound(&d, &batteries, sense_rate))?;
            let greedy = greedy_msc_schedule(&d, &batteries, psi, sense_rate);
            writeln!(stdout, "greedy_msc_lifetime={}", greedy.total_lifetime)?;
            if d.n_sensors() <= EXHAUSTIVE_MAX_SENSORS {
                let k = exhaustive_max_disjoint_covers(&d)?;
                writeln!(stdout, "max_disjoint_covers={k}")?;
                writeln!(stdout, "disjoint_cover_lifetime={}", k as f64 * battery / sense_rate)?;
            }
            Ok(())
        }
    }
}

fn apply_overrides(cfg: &mut ExperimentConfig, trials: Option<usize>, seed: Option<u64>, comm_scale: Option<f64>) {
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(c) = comm_scale {
        cfg.energy.comm_scale = c;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<ConfigProblem>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
