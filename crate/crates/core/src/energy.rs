//! First-order radio model and per-sensor battery bookkeeping.

use serde::Serialize;

use crate::scalar::Scalar;

/// First-order radio constants. `comm_scale` converts joules into battery
/// units; zero turns all communication free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadioParams<S> {
    /// Electronics energy per bit, J/bit.
    pub e_elec: S,
    /// Amplifier energy, J/bit/m².
    pub eps_amp: S,
    pub packet_bits: u64,
    pub comm_scale: S,
}

impl<S: Scalar> Default for RadioParams<S> {
    fn default() -> Self {
        Self {
            e_elec: S::of(50e-9),
            eps_amp: S::of(100e-12),
            packet_bits: 2000,
            comm_scale: S::one(),
        }
    }
}

impl<S: Scalar> RadioParams<S> {
    pub fn free(&self) -> bool {
        self.comm_scale == S::zero()
    }

    /// `comm_scale · (e_elec·k + eps_amp·k·d²)`.
    pub fn tx_cost(&self, bits: u64, distance: S) -> S {
        let k = S::of(bits as f64);
        self.comm_scale * (self.e_elec * k + self.eps_amp * k * distance * distance)
    }

    /// `comm_scale · e_elec·k`.
    pub fn rx_cost(&self, bits: u64) -> S {
        self.comm_scale * self.e_elec * S::of(bits as f64)
    }
}

pub fn sensing_cost<S: Scalar>(sense_rate: S, duration: S) -> S {
    sense_rate * duration
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Battery<S> {
    pub initial: S,
    pub residual: S,
}

impl<S: Scalar> Battery<S> {
    pub fn full(initial: S) -> Self {
        Self { initial, residual: initial }
    }

    /// Clamped debit. Returns the updated battery and whether this debit
    /// emptied a battery that still held charge.
    #[must_use]
    pub fn debit(self, amount: S) -> (Self, bool) {
        let residual = (self.residual - amount).max(S::zero());
        let died = self.residual > S::zero() && residual == S::zero();
        (Self { residual, ..self }, died)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DebitCause {
    InitPhase,
    LearningComm,
    Sensing,
}

/// Cumulative per-sensor debits split by cause.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyLedger<S> {
    pub init_phase: Vec<S>,
    pub learning_comm: Vec<S>,
    pub sensing: Vec<S>,
}

impl<S: Scalar> EnergyLedger<S> {
    pub fn new(n_sensors: usize) -> Self {
        Self {
            init_phase: vec![S::zero(); n_sensors],
            learning_comm: vec![S::zero(); n_sensors],
            sensing: vec![S::zero(); n_sensors],
        }
    }

    pub fn record(&mut self, sensor: usize, cause: DebitCause, amount: S) {
        let slot = match cause {
            DebitCause::InitPhase => &mut self.init_phase[sensor],
            DebitCause::LearningComm => &mut self.learning_comm[sensor],
            DebitCause::Sensing => &mut self.sensing[sensor],
        };
        *slot = *slot + amount;
    }

    pub fn total(&self, sensor: usize) -> S {
        self.init_phase[sensor] + self.learning_comm[sensor] + self.sensing[sensor]
    }

    pub fn grand_total(&self) -> S {
        (0..self.init_phase.len()).map(|i| self.total(i)).sum()
    }

    /// Debits `battery` and records what was actually drained. Returns the
    /// death flag from [`Battery::debit`].
    pub fn charge(&mut self, sensor: usize, battery: &mut Battery<S>, cause: DebitCause, amount: S) -> bool {
        let before = battery.residual;
        let (after, died) = battery.debit(amount);
        *battery = after;
        self.record(sensor, cause, before - after.residual);
        died
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    use super::*;

    fn radio(scale: f64) -> RadioParams<f64> {
        RadioParams { comm_scale: scale, ..RadioParams::default() }
    }

    #[test]
    fn tx_spot_value() {
        assert_relative_eq!(radio(1.0).tx_cost(2000, 100.0), 2.1e-3, max_relative = 1e-12);
        assert_eq!(radio(0.0).tx_cost(2000, 100.0), 0.0);
        assert_relative_eq!(radio(1.0).tx_cost(2000, 0.0), 50e-9 * 2000.0, max_relative = 1e-12);
    }

    #[test]
    fn rx_spot_value() {
        assert_relative_eq!(radio(1.0).rx_cost(2000), 1.0e-4, max_relative = 1e-12);
        assert_eq!(radio(1.0).rx_cost(0), 0.0);
        assert_relative_eq!(radio(2.0).rx_cost(2000), 2.0 * radio(1.0).rx_cost(2000), max_relative = 1e-15);
    }

    #[test]
    fn sensing_spot_values() {
        assert_relative_eq!(sensing_cost(1.0, 0.2), 0.2);
        assert_eq!(sensing_cost(1.0, 0.0), 0.0);
        assert_relative_eq!(sensing_cost(0.5, 0.2), 0.1);
    }

    #[test]
    fn debit_clamps_and_reports_death() {
        let (b, died) = Battery::full(1.0).debit(0.2);
        assert_relative_eq!(b.residual, 0.8);
        assert!(!died);

        let (b, died) = Battery { initial: 1.0, residual: 0.1 }.debit(0.2);
        assert_eq!(b.residual, 0.0);
        assert!(died);

        let start = Battery { initial: 1.0, residual: 0.4 };
        assert_eq!(start.debit(0.0), (start, false));

        let (_, died) = Battery { initial: 1.0, residual: 0.0 }.debit(0.5);
        assert!(!died, "already empty batteries do not die twice");
    }

    #[test]
    fn ledger_tracks_clamped_amount() {
        let mut ledger = EnergyLedger::new(1);
        let mut battery = Battery { initial: 1.0, residual: 0.3 };
        ledger.charge(0, &mut battery, DebitCause::Sensing, 0.2);
        ledger.charge(0, &mut battery, DebitCause::LearningComm, 0.5);
        assert_eq!(battery.residual, 0.0);
        assert_relative_eq!(ledger.total(0), 0.3, max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn tx_monotone(bits in 0u64..10_000, extra in 0u64..10_000, d in 0.0f64..1000.0, dd in 0.0f64..1000.0) {
            let r = radio(1.0);
            prop_assert!(r.tx_cost(bits, d) <= r.tx_cost(bits + extra, d));
            prop_assert!(r.tx_cost(bits, d) <= r.tx_cost(bits, d + dd));
        }

        #[test]
        fn residual_stays_in_range(amounts in proptest::collection::vec(0.0f64..0.5, 0..50)) {
            let mut ledger = EnergyLedger::new(1);
            let mut b = Battery::full(1.0);
            for a in amounts {
                ledger.charge(0, &mut b, DebitCause::Sensing, a);
                prop_assert!(b.residual >= 0.0 && b.residual <= b.initial);
            }
            prop_assert!((ledger.total(0) - (b.initial - b.residual)).abs() <= 1e-12);
        }
    }
}
