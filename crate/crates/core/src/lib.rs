//! Learning-automata sleep/active scheduling for wireless sensor networks
//! that must keep a set of fixed targets under watch.
//!
//! Each sensor carries a two-action learning automaton. Rounds consist of a
//! learning phase, where randomly chosen sensors exchange LAP packets with
//! their neighbours and reward or penalise their own choice depending on
//! whether active neighbours already cover their targets, followed by a
//! monitoring phase of fixed length ψ. The run ends once the surviving
//! sensors can no longer cover every target; that cumulative monitoring time
//! is the network lifetime.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`). The aliases
//! below fix the scalar for the common cases; the experiment harness works
//! in `f64`.

pub mod automaton;
pub mod baselines;
pub mod config;
pub mod energy;
pub mod error;
pub mod laml;
pub mod network;
pub mod scalar;
pub mod sim;
pub mod sweep;
pub mod trials;

pub use automaton::{Action, ParamError, Scheme, Signal};
pub use baselines::{exhaustive_max_disjoint_covers, greedy_msc_schedule, lifetime_upper_bound, OracleError};
pub use config::{Algorithm, ConfigError, EnergyConfig, ExperimentConfig, LearningConfig};
pub use energy::DebitCause;
pub use error::{Error, Result};
pub use laml::{reinforcement_decision, EngineError, LapExchange, LearningOutcome};
pub use network::{covers, deploy_random, ScenarioFile, TargetSet};
pub use scalar::Scalar;
pub use sim::{run_simulation, simulate_on};
pub use sweep::{sweep, Preset, SweepSpec};
pub use trials::{run_trial, run_trial_results, run_trials, trial_seed, TrialSummary};

pub type AutomatonState = automaton::AutomatonState<f64>;
pub type AutomatonState32 = automaton::AutomatonState<f32>;
pub type LearningParams = automaton::LearningParams<f64>;
pub type LearningParams32 = automaton::LearningParams<f32>;

pub type Point2 = network::Point2<f64>;
pub type SensorSpec = network::SensorSpec<f64>;
pub type TargetSpec = network::TargetSpec<f64>;
pub type Deployment = network::Deployment<f64>;
pub type Deployment32 = network::Deployment<f32>;

pub type RadioParams = energy::RadioParams<f64>;
pub type Battery = energy::Battery<f64>;
pub type EnergyLedger = energy::EnergyLedger<f64>;

pub type LamlSettings = laml::LamlSettings<f64>;
pub type LamlNetwork<'d> = laml::LamlNetwork<'d, f64>;
pub type LamlNetwork32<'d> = laml::LamlNetwork<'d, f32>;
pub type NodeRuntime = laml::NodeRuntime<f64>;
pub type RoundRecord = laml::RoundRecord<f64>;

pub type CoverSchedule = baselines::CoverSchedule<f64>;
pub type SimulationResult = sim::SimulationResult<f64>;
pub type SimulationResult32 = sim::SimulationResult<f32>;
