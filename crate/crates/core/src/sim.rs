//! Whole-run simulation: deploy, then schedule rounds until the alive
//! sensors can no longer cover every target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baselines::{greedy_msc_schedule, lifetime_upper_bound};
use crate::config::{Algorithm, ExperimentConfig};
use crate::energy::{sensing_cost, Battery, DebitCause, EnergyLedger};
use crate::error::{Error, Result};
use crate::laml::{LamlNetwork, RoundRecord};
use crate::network::{deploy_random, Deployment};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult<S> {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// `rounds.len() · ψ`.
    pub lifetime: S,
    pub rounds: Vec<RoundRecord<S>>,
    pub final_residuals: Vec<S>,
    pub total_learning_iterations: usize,
    /// Per-target energy bound for this deployment at full batteries.
    pub upper_bound: S,
    pub ledger: EnergyLedger<S>,
    pub deployment: Deployment<S>,
}

/// Deploys from `seed` and runs the configured algorithm on it.
pub fn run_simulation<S: Scalar>(config: &ExperimentConfig, seed: u64) -> Result<SimulationResult<S>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deployment = deploy_random(
        S::of(config.area_side),
        config.n_sensors,
        config.n_targets,
        S::of(config.sensing_range),
        S::of(config.effective_comm_radius()),
        &mut rng,
    )?;
    let mut result = simulate_on(deployment, config, &mut rng)?;
    result.seed = seed;
    Ok(result)
}

/// Runs the configured algorithm on a fixed deployment. Learning draws come
/// from `rng`; Greedy-MSC is deterministic and ignores it.
pub fn simulate_on<S: Scalar, R: Rng + ?Sized>(
    deployment: Deployment<S>,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<SimulationResult<S>> {
    config.validate()?;
    if deployment.n_targets() == 0 {
        return Err(Error::NoTargets);
    }
    let n = deployment.n_sensors();
    let psi = S::of(config.psi);
    let sense_rate = S::of(config.energy.sense_rate);
    let full = vec![S::of(config.energy.initial_battery); n];
    let upper_bound = lifetime_upper_bound(&deployment, &full, sense_rate);

    let (rounds, final_residuals, ledger) = match config.algorithm {
        Algorithm::Laml => {
            let mut network = LamlNetwork::initial_phase(&deployment, config.laml_settings(n));
            let mut rounds = Vec::new();
            while let Some(record) = network.run_round(rounds.len(), rng)? {
                rounds.push(record);
            }
            (rounds, network.residuals(), network.ledger().clone())
        }
        Algorithm::GreedyMsc => {
            let schedule = greedy_msc_schedule(&deployment, &full, psi, sense_rate);
            let cost = sensing_cost(sense_rate, psi);
            let mut ledger = EnergyLedger::new(n);
            let mut batteries: Vec<_> = full.iter().map(|&b| Battery::full(b)).collect();
            let rounds = schedule
                .covers
                .into_iter()
                .enumerate()
                .map(|(round_index, (cover, duration))| {
                    let before = ledger.grand_total();
                    for &id in &cover {
                        ledger.charge(id, &mut batteries[id], DebitCause::Sensing, cost);
                    }
                    let mut active_set = cover;
                    active_set.sort_unstable();
                    RoundRecord {
                        round_index,
                        learning_iterations: 0,
                        active_set,
                        patched: Vec::new(),
                        duration,
                        energy_spent: ledger.grand_total() - before,
                    }
                })
                .collect();
            (rounds, batteries.iter().map(|b| b.residual).collect(), ledger)
        }
    };

    Ok(SimulationResult {
        algorithm: config.algorithm,
        seed: 0,
        lifetime: S::of_count(rounds.len()) * psi,
        total_learning_iterations: rounds.iter().map(|r| r.learning_iterations).sum(),
        rounds,
        final_residuals,
        upper_bound,
        ledger,
        deployment,
    })
}
