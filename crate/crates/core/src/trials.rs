//! Multi-trial runs with portable per-trial seeds and order-independent
//! aggregation.
//!
//! Trial `i` of a batch with master seed `m` runs with
//!
//! ```text
//! z = m + (i + 1) · 0x9E3779B97F4A7C15            (mod 2^64)
//! z = (z ^ (z >> 30)) · 0xBF58476D1CE4E5B9        (mod 2^64)
//! z = (z ^ (z >> 27)) · 0x94D049BB133111EB        (mod 2^64)
//! seed_i = z ^ (z >> 31)
//! ```
//!
//! which is the `(i + 1)`-th output of a SplitMix64 generator started at `m`.
//! The per-trial generator is ChaCha8 seeded from `seed_i` via
//! `SeedableRng::seed_from_u64`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::sim::{run_simulation, SimulationResult};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed for trial `index` of a batch.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_trial(config: &ExperimentConfig, index: usize) -> Result<SimulationResult<f64>> {
    run_simulation(config, trial_seed(config.master_seed, index as u64))
}

/// Runs `config.trials` trials on `jobs` worker threads. Results come back in
/// trial order whatever the scheduling.
pub fn run_trial_results(config: &ExperimentConfig, jobs: usize) -> Result<Vec<SimulationResult<f64>>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    pool.install(|| (0..config.trials).into_par_iter().map(|i| run_trial(config, i)).collect())
}

/// One CSV row: a configuration echo plus lifetime statistics over its trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub algorithm: String,
    pub preset: String,
    pub n_sensors: usize,
    pub n_targets: usize,
    pub sensing_range: f64,
    pub learning_rate: f64,
    pub psi: f64,
    pub trials: usize,
    pub mean_lifetime: f64,
    /// Sample standard deviation; zero for a single trial.
    pub std_lifetime: f64,
    pub min_lifetime: f64,
    pub max_lifetime: f64,
    pub mean_rounds: f64,
    pub mean_learning_iters: f64,
    pub master_seed: u64,
}

impl TrialSummary {
    /// Aggregates results given in trial order.
    pub fn from_results(config: &ExperimentConfig, preset: &str, results: &[SimulationResult<f64>]) -> Self {
        let n = results.len();
        assert!(n > 0, "at least one trial");
        let count = n as f64;
        let lifetimes: Vec<f64> = results.iter().map(|r| r.lifetime).collect();
        let mean = lifetimes.iter().sum::<f64>() / count;
        let std = if n > 1 {
            (lifetimes.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            algorithm: config.algorithm.label().to_string(),
            preset: preset.to_string(),
            n_sensors: config.n_sensors,
            n_targets: config.n_targets,
            sensing_range: config.sensing_range,
            learning_rate: config.learning.a,
            psi: config.psi,
            trials: n,
            mean_lifetime: mean,
            std_lifetime: std,
            min_lifetime: lifetimes.iter().copied().fold(f64::INFINITY, f64::min),
            max_lifetime: lifetimes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_rounds: results.iter().map(|r| r.rounds.len() as f64).sum::<f64>() / count,
            mean_learning_iters: results.iter().map(|r| r.total_learning_iterations as f64).sum::<f64>() / count,
            master_seed: config.master_seed,
        }
    }
}

pub fn run_trials(config: &ExperimentConfig, preset: &str, jobs: usize) -> Result<TrialSummary> {
    let results = run_trial_results(config, jobs)?;
    Ok(TrialSummary::from_results(config, preset, &results))
}
