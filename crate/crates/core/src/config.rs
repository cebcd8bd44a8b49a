//! Experiment configuration: the JSON schema read by the CLI and the knobs
//! every run, trial batch, and sweep point is driven by.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{LearningParams, Scheme};
use crate::energy::RadioParams;
use crate::laml::LamlSettings;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Laml,
    #[serde(alias = "greedy")]
    GreedyMsc,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Laml => "laml",
            Algorithm::GreedyMsc => "greedy_msc",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LearningConfig {
    pub scheme: Scheme,
    pub a: f64,
    pub b: f64,
}

impl Default for LearningConfig {
    fn default() -> Self {
        Self { scheme: Scheme::Lrp, a: 0.1, b: 0.1 }
    }
}

impl LearningConfig {
    /// Moves the reward rate to `rate`, adjusting `b` so the scheme still
    /// holds: equal for reward-penalty, zero for reward-inaction, and the
    /// same `b / a` ratio for reward-epsilon-penalty.
    pub fn with_rate(self, rate: f64) -> Self {
        let b = match self.scheme {
            Scheme::Lrp => rate,
            Scheme::Lri => 0.0,
            Scheme::Lrep => rate * self.b / self.a,
        };
        Self { a: rate, b, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyConfig {
    pub initial_battery: f64,
    pub sense_rate: f64,
    pub e_elec: f64,
    pub eps_amp: f64,
    pub packet_bits: u64,
    pub comm_scale: f64,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        let radio = RadioParams::<f64>::default();
        Self {
            initial_battery: 1.0,
            sense_rate: 1.0,
            e_elec: radio.e_elec,
            eps_amp: radio.eps_amp,
            packet_bits: radio.packet_bits,
            comm_scale: 0.0,
        }
    }
}

/// Every knob of a run. Field names are the JSON keys; omitted keys take
/// their defaults and unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub area_side: f64,
    pub n_sensors: usize,
    pub n_targets: usize,
    pub sensing_range: f64,
    /// `None` means twice the sensing range.
    pub comm_radius: Option<f64>,
    pub psi: f64,
    pub theta: f64,
    pub learning: LearningConfig,
    pub energy: EnergyConfig,
    pub max_learning_iters_factor: usize,
    pub reset_automata_each_round: bool,
    pub trials: usize,
    pub master_seed: u64,
    pub algorithm: Algorithm,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            area_side: 500.0,
            n_sensors: 20,
            n_targets: 10,
            sensing_range: 300.0,
            comm_radius: None,
            psi: 0.2,
            theta: 0.85,
            learning: LearningConfig::default(),
            energy: EnergyConfig::default(),
            max_learning_iters_factor: 100,
            reset_automata_each_round: true,
            trials: 50,
            master_seed: 0x5EED,
            algorithm: Algorithm::Laml,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldIssue {
    pub field: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub issues: Vec<FieldIssue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration")?;
        for issue in &self.issues {
            write!(f, "; {}: {}", issue.field, issue.message)?;
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn effective_comm_radius(&self) -> f64 {
        self.comm_radius.unwrap_or(2.0 * self.sensing_range)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut issues = Vec::new();
        let mut check = |ok: bool, field: &'static str, message: String| {
            if !ok {
                issues.push(FieldIssue { field, message });
            }
        };
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;

        check(positive(self.area_side), "area_side", format!("must be positive, got {}", self.area_side));
        check(self.n_sensors >= 1, "n_sensors", "must be at least 1".into());
        check(self.n_targets >= 1, "n_targets", "must be at least 1".into());
        check(
            positive(self.sensing_range),
            "sensing_range",
            format!("must be positive, got {}", self.sensing_range),
        );
        if let Some(r) = self.comm_radius {
            check(
                positive(r) && r >= self.sensing_range,
                "comm_radius",
                format!("must be at least sensing_range ({}), got {r}", self.sensing_range),
            );
        }
        check(positive(self.psi), "psi", format!("must be positive, got {}", self.psi));
        check(
            self.theta > 0.5 && self.theta < 1.0,
            "theta",
            format!("must lie in (0.5, 1), got {}", self.theta),
        );
        if let Err(e) = LearningParams::new(self.learning.scheme, self.learning.a, self.learning.b) {
            check(false, "learning", e.to_string());
        }
        let e = &self.energy;
        check(
            positive(e.initial_battery),
            "energy.initial_battery",
            format!("must be positive, got {}", e.initial_battery),
        );
        check(positive(e.sense_rate), "energy.sense_rate", format!("must be positive, got {}", e.sense_rate));
        check(nonneg(e.e_elec), "energy.e_elec", format!("must be non-negative, got {}", e.e_elec));
        check(nonneg(e.eps_amp), "energy.eps_amp", format!("must be non-negative, got {}", e.eps_amp));
        check(nonneg(e.comm_scale), "energy.comm_scale", format!("must be non-negative, got {}", e.comm_scale));
        check(self.trials >= 1, "trials", "must be at least 1".into());
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { issues })
        }
    }

    pub fn learning_params<S: Scalar>(&self) -> LearningParams<S> {
        LearningParams::new(self.learning.scheme, S::of(self.learning.a), S::of(self.learning.b))
            .expect("validated learning parameters")
    }

    pub fn radio<S: Scalar>(&self) -> RadioParams<S> {
        RadioParams {
            e_elec: S::of(self.energy.e_elec),
            eps_amp: S::of(self.energy.eps_amp),
            packet_bits: self.energy.packet_bits,
            comm_scale: S::of(self.energy.comm_scale),
        }
    }

    /// Engine settings for a network of `n_sensors` nodes.
    pub fn laml_settings<S: Scalar>(&self, n_sensors: usize) -> LamlSettings<S> {
        LamlSettings {
            learning: self.learning_params(),
            theta: S::of(self.theta),
            psi: S::of(self.psi),
            sense_rate: S::of(self.energy.sense_rate),
            initial_battery: S::of(self.energy.initial_battery),
            radio: self.radio(),
            max_iters: self.max_learning_iters_factor * n_sensors,
            reset_each_round: self.reset_automata_each_round,
        }
    }
}
