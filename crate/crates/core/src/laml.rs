//! The LAML round protocol: neighbour discovery, automaton negotiation over
//! LAP exchanges, and the target monitoring phase.
//!
//! A [`LamlNetwork`] owns the mutable per-node state for one simulation run.
//! Nodes are *alive* while their battery can pay for a full monitoring phase;
//! dead nodes neither initiate, reply, nor get scheduled.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{Action, AutomatonState, LearningParams, Signal};
use crate::energy::{sensing_cost, Battery, DebitCause, EnergyLedger, RadioParams};
use crate::network::{Deployment, TargetSet};
use crate::scalar::{can_afford, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no alive sensor can initiate a learning exchange")]
    NoAliveNodes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LamlSettings<S> {
    pub learning: LearningParams<S>,
    /// Convergence threshold on the winning action probability.
    pub theta: S,
    /// Monitoring phase length.
    pub psi: S,
    pub sense_rate: S,
    pub initial_battery: S,
    pub radio: RadioParams<S>,
    /// Learning iterations allowed per round.
    pub max_iters: usize,
    pub reset_each_round: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeRuntime<S> {
    pub id: usize,
    pub automaton: AutomatonState<S>,
    pub neighbors: Vec<usize>,
    #[serde(skip)]
    pub covered: TargetSet,
    pub battery: Battery<S>,
    pub alive: bool,
}

/// One LAP round trip: the initiator's broadcast, the neighbours' replies,
/// and the signal the initiator derived from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LapExchange {
    pub initiator: usize,
    pub initiator_action: Action,
    pub replies: Vec<(usize, Action)>,
    pub signal: Signal,
}

impl Default for LapExchange {
    fn default() -> Self {
        Self { initiator: 0, initiator_action: Action::Idle, replies: Vec::new(), signal: Signal::Reward }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord<S> {
    pub round_index: usize,
    pub learning_iterations: usize,
    /// Sensors scheduled by the learned automata, sorted.
    pub active_set: Vec<usize>,
    /// Sensors added afterwards to close coverage holes, in insertion order.
    pub patched: Vec<usize>,
    pub duration: S,
    pub energy_spent: S,
}

impl<S> RoundRecord<S> {
    pub fn scheduled(&self) -> impl Iterator<Item = usize> + '_ {
        self.active_set.iter().chain(self.patched.iter()).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningOutcome {
    pub active_set: Vec<usize>,
    pub patched: Vec<usize>,
    pub iterations: usize,
}

/// Signal for an initiator whose covered targets are (or are not) all seen by
/// neighbours that replied `Active`.
///
/// Staying active while redundant, or idling while needed, is penalised.
pub fn reinforcement_decision(
    initiator_action: Action,
    covered: &TargetSet,
    active_neighbor_cover: &TargetSet,
) -> Signal {
    let redundant = covered.is_subset(active_neighbor_cover);
    match (initiator_action, redundant) {
        (Action::Active, true) | (Action::Idle, false) => Signal::Penalty,
        (Action::Active, false) | (Action::Idle, true) => Signal::Reward,
    }
}

pub struct LamlNetwork<'d, S> {
    deployment: &'d Deployment<S>,
    settings: LamlSettings<S>,
    nodes: Vec<NodeRuntime<S>>,
    neighbor_distances: Vec<Vec<S>>,
    ledger: EnergyLedger<S>,
    alive_ids: Vec<usize>,
    alive_dirty: bool,
    scratch_cover: TargetSet,
}

impl<'d, S: Scalar> LamlNetwork<'d, S> {
    /// Every node broadcasts one INITIALIZATION packet at `comm_radius` and
    /// receives one from each neighbour. Automata start uniform.
    pub fn initial_phase(deployment: &'d Deployment<S>, settings: LamlSettings<S>) -> Self {
        let adjacency = deployment.neighbor_graph();
        let n = deployment.n_sensors();
        let mut ledger = EnergyLedger::new(n);
        let radio = settings.radio;
        let bits = radio.packet_bits;
        let mut nodes = Vec::with_capacity(n);
        let mut neighbor_distances = Vec::with_capacity(n);
        for (id, neighbors) in adjacency.into_iter().enumerate() {
            let mut battery = Battery::full(settings.initial_battery);
            if !radio.free() {
                let cost = radio.tx_cost(bits, deployment.comm_radius())
                    + radio.rx_cost(bits) * S::of_count(neighbors.len());
                ledger.charge(id, &mut battery, DebitCause::InitPhase, cost);
            }
            neighbor_distances.push(neighbors.iter().map(|&j| deployment.sensor_distance(id, j)).collect());
            nodes.push(NodeRuntime {
                id,
                automaton: AutomatonState::uniform(settings.learning),
                neighbors,
                covered: deployment.covered_by(id).clone(),
                battery,
                alive: true,
            });
        }
        let mut network = Self {
            deployment,
            settings,
            nodes,
            neighbor_distances,
            ledger,
            alive_ids: Vec::with_capacity(n),
            alive_dirty: true,
            scratch_cover: TargetSet::with_capacity(deployment.n_targets()),
        };
        network.refresh_alive();
        network
    }

    pub fn nodes(&self) -> &[NodeRuntime<S>] {
        &self.nodes
    }

    pub fn nodes_mut(&mut self) -> &mut [NodeRuntime<S>] {
        self.alive_dirty = true;
        &mut self.nodes
    }

    pub fn ledger(&self) -> &EnergyLedger<S> {
        &self.ledger
    }

    pub fn settings(&self) -> &LamlSettings<S> {
        &self.settings
    }

    pub fn deployment(&self) -> &'d Deployment<S> {
        self.deployment
    }

    /// Energy one monitoring phase costs an active node.
    pub fn activation_cost(&self) -> S {
        sensing_cost(self.settings.sense_rate, self.settings.psi)
    }

    pub fn alive_ids(&mut self) -> &[usize] {
        self.refresh_alive();
        &self.alive_ids
    }

    pub fn residuals(&self) -> Vec<S> {
        self.nodes.iter().map(|n| n.battery.residual).collect()
    }

    fn refresh_alive(&mut self) {
        let cost = self.activation_cost();
        self.alive_ids.clear();
        for node in &mut self.nodes {
            node.alive = can_afford(node.battery.residual, cost);
            if node.alive {
                self.alive_ids.push(node.id);
            }
        }
        self.alive_dirty = false;
    }

    fn charge_comm(&mut self, id: usize, amount: S) {
        let cost = self.activation_cost();
        let node = &mut self.nodes[id];
        self.ledger.charge(id, &mut node.battery, DebitCause::LearningComm, amount);
        if node.alive && !can_afford(node.battery.residual, cost) {
            self.alive_dirty = true;
        }
    }

    /// Targets seen by at least one alive node.
    pub fn coverable_targets(&mut self) -> TargetSet {
        self.refresh_alive();
        self.deployment.coverage_of(self.alive_ids.iter().copied())
    }

    pub fn is_coverable(&mut self) -> bool {
        self.coverable_targets().count_ones(..) == self.deployment.n_targets()
    }

    pub fn reset_automata(&mut self) {
        for node in &mut self.nodes {
            node.automaton.reset();
        }
    }

    /// One LAP exchange. A uniformly chosen alive initiator and each of its
    /// alive neighbours sample an action; only the initiator's automaton is
    /// updated. The exchange is written into `exchange`, reusing its buffer.
    pub fn learning_iteration<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        exchange: &mut LapExchange,
    ) -> Result<(), EngineError> {
        if self.alive_dirty {
            self.refresh_alive();
        }
        if self.alive_ids.is_empty() {
            return Err(EngineError::NoAliveNodes);
        }
        let initiator = self.alive_ids[rng.random_range(0..self.alive_ids.len())];
        let action = self.nodes[initiator].automaton.select_action(rng);

        exchange.initiator = initiator;
        exchange.initiator_action = action;
        exchange.replies.clear();
        self.scratch_cover.clear();
        for &j in &self.nodes[initiator].neighbors {
            let neighbor = &self.nodes[j];
            if !neighbor.alive {
                continue;
            }
            let reply = neighbor.automaton.select_action(rng);
            if reply == Action::Active {
                self.scratch_cover.union_with(&neighbor.covered);
            }
            exchange.replies.push((j, reply));
        }

        let node = &mut self.nodes[initiator];
        let signal = reinforcement_decision(action, &node.covered, &self.scratch_cover);
        node.automaton = node.automaton.apply(action, signal);
        exchange.signal = signal;

        let radio = self.settings.radio;
        if !radio.free() {
            let bits = radio.packet_bits;
            let rx = radio.rx_cost(bits);
            let broadcast = radio.tx_cost(bits, self.deployment.comm_radius());
            self.charge_comm(initiator, broadcast + rx * S::of_count(exchange.replies.len()));
            let mut k = 0;
            for &(j, _) in &exchange.replies {
                while self.nodes[initiator].neighbors[k] != j {
                    k += 1;
                }
                let unicast = radio.tx_cost(bits, self.neighbor_distances[initiator][k]);
                self.charge_comm(j, rx + unicast);
            }
        }
        Ok(())
    }

    fn is_converged(&self, id: usize) -> bool {
        self.nodes[id].automaton.converged(self.settings.theta)
    }

    fn unconverged_alive(&self) -> usize {
        self.alive_ids.iter().filter(|&&id| !self.is_converged(id)).count()
    }

    fn induced_active(&self) -> Vec<usize> {
        let theta = self.settings.theta;
        self.alive_ids
            .iter()
            .copied()
            .filter(|&id| self.nodes[id].automaton.p_active() >= theta)
            .collect()
    }

    /// Repeats LAP exchanges until every alive automaton has converged and
    /// the nodes that converged to `Active` cover every coverable target, or
    /// until `max_iters`. Only nodes with `p_active >= θ` come out active;
    /// the coverage patch then closes any remaining hole.
    pub fn run_learning_phase<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<LearningOutcome, EngineError> {
        self.refresh_alive();
        if self.alive_ids.is_empty() {
            return Err(EngineError::NoAliveNodes);
        }
        let mut exchange = LapExchange::default();
        let theta = self.settings.theta;
        let mut converged: Vec<bool> = self.nodes.iter().map(|n| n.automaton.converged(theta)).collect();
        let mut unconverged = self.unconverged_alive();
        let mut iterations = 0;
        loop {
            if unconverged == 0 && self.induced_cover_complete() {
                break;
            }
            if iterations == self.settings.max_iters {
                break;
            }
            self.learning_iteration(rng, &mut exchange)?;
            iterations += 1;
            let id = exchange.initiator;
            let now = self.nodes[id].automaton.converged(theta);
            if self.alive_dirty {
                // Learning traffic emptied a battery: the alive set changed.
                converged[id] = now;
                self.refresh_alive();
                unconverged = self.unconverged_alive();
            } else if now != converged[id] {
                converged[id] = now;
                if now {
                    unconverged -= 1;
                } else {
                    unconverged += 1;
                }
            }
        }

        self.refresh_alive();
        let active_set = self.induced_active();
        let patched = self.coverage_patch(&active_set);
        Ok(LearningOutcome { active_set, patched, iterations })
    }

    fn induced_cover_complete(&self) -> bool {
        let have = self.deployment.coverage_of(self.induced_active());
        let need = self.deployment.coverage_of(self.alive_ids.iter().copied());
        need.is_subset(&have)
    }

    /// Adds alive, unscheduled nodes one at a time until every coverable
    /// target is covered. Each pick maximises newly covered targets, then
    /// residual energy, then prefers the lower id.
    pub fn coverage_patch(&mut self, active_set: &[usize]) -> Vec<usize> {
        self.refresh_alive();
        let need = self.deployment.coverage_of(self.alive_ids.iter().copied());
        let mut have = self.deployment.coverage_of(active_set.iter().copied());
        let mut uncovered = need;
        uncovered.difference_with(&have);
        let mut scheduled = vec![false; self.nodes.len()];
        for &id in active_set {
            scheduled[id] = true;
        }
        let mut patched = Vec::new();
        while uncovered.count_ones(..) > 0 {
            let best = self
                .alive_ids
                .iter()
                .copied()
                .filter(|&id| !scheduled[id])
                .map(|id| (id, self.nodes[id].covered.intersection_count(&uncovered)))
                .filter(|&(_, gain)| gain > 0)
                .max_by(|a, b| {
                    a.1.cmp(&b.1)
                        .then_with(|| {
                            let (ra, rb) = (self.nodes[a.0].battery.residual, self.nodes[b.0].battery.residual);
                            ra.partial_cmp(&rb).expect("residuals are finite")
                        })
                        .then_with(|| b.0.cmp(&a.0))
                });
            let Some((id, _)) = best else { break };
            scheduled[id] = true;
            have.union_with(&self.nodes[id].covered);
            uncovered.difference_with(&self.nodes[id].covered);
            patched.push(id);
        }
        patched
    }

    /// Each scheduled node pays `sense_rate · ψ`; sleeping nodes pay nothing.
    /// Returns the phase duration ψ.
    pub fn monitoring_phase(&mut self, scheduled: &[usize]) -> S {
        let cost = self.activation_cost();
        for &id in scheduled {
            let node = &mut self.nodes[id];
            self.ledger.charge(id, &mut node.battery, DebitCause::Sensing, cost);
        }
        self.alive_dirty = true;
        self.settings.psi
    }

    /// One learning + monitoring round. Returns `None` when the alive nodes
    /// can no longer cover every target, either at the start of the round or
    /// after learning-phase traffic drained some of them.
    pub fn run_round<R: Rng + ?Sized>(
        &mut self,
        round_index: usize,
        rng: &mut R,
    ) -> Result<Option<RoundRecord<S>>, EngineError> {
        if !self.is_coverable() {
            return Ok(None);
        }
        let spent_before = self.ledger.grand_total();
        if self.settings.reset_each_round {
            self.reset_automata();
        }
        let outcome = self.run_learning_phase(rng)?;
        if !self.is_coverable() {
            return Ok(None);
        }
        let scheduled: Vec<usize> = outcome.active_set.iter().chain(outcome.patched.iter()).copied().collect();
        let duration = self.monitoring_phase(&scheduled);
        Ok(Some(RoundRecord {
            round_index,
            learning_iterations: outcome.iterations,
            active_set: outcome.active_set,
            patched: outcome.patched,
            duration,
            energy_spent: self.ledger.grand_total() - spent_before,
        }))
    }
}
