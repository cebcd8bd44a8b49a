//! Two-action variable-structure learning automaton with linear
//! reward/penalty updates under a binary (P-model) environment.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// The two actions available to every sensor's automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Active,
    Idle,
}

impl Action {
    /// Number of actions, `r` in the update rule.
    pub const COUNT: usize = 2;

    fn index(self) -> usize {
        match self {
            Action::Active => 0,
            Action::Idle => 1,
        }
    }
}

/// Binary environment response: `Reward` is β = 0, `Penalty` is β = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signal {
    Reward,
    Penalty,
}

/// Linear update scheme family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Reward-inaction: penalties leave the vector untouched (`b = 0`).
    Lri,
    /// Reward-penalty with symmetric rates (`a = b`).
    Lrp,
    /// Reward-epsilon-penalty (`0 < b <= a / 10`).
    Lrep,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("reward rate {0} outside [0, 1)")]
    RewardRate(f64),
    #[error("penalty rate {0} outside [0, 1)")]
    PenaltyRate(f64),
    #[error("scheme {scheme:?} does not admit a = {a}, b = {b}")]
    SchemeMismatch { scheme: Scheme, a: f64, b: f64 },
}

/// Reward rate `a`, penalty rate `b`, and the scheme they satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LearningParams<S> {
    reward: S,
    penalty: S,
    scheme: Scheme,
}

impl<S: Scalar> LearningParams<S> {
    pub fn new(scheme: Scheme, reward: S, penalty: S) -> Result<Self, ParamError> {
        let (a, b) = (reward.as_f64(), penalty.as_f64());
        if !(0.0..1.0).contains(&a) {
            return Err(ParamError::RewardRate(a));
        }
        if !(0.0..1.0).contains(&b) {
            return Err(ParamError::PenaltyRate(b));
        }
        let ok = match scheme {
            Scheme::Lri => penalty == S::zero(),
            Scheme::Lrp => reward == penalty,
            Scheme::Lrep => penalty > S::zero() && penalty * S::of(10.0) <= reward,
        };
        if !ok {
            return Err(ParamError::SchemeMismatch { scheme, a, b });
        }
        Ok(Self { reward, penalty, scheme })
    }

    pub fn lri(reward: S) -> Result<Self, ParamError> {
        Self::new(Scheme::Lri, reward, S::zero())
    }

    pub fn lrp(rate: S) -> Result<Self, ParamError> {
        Self::new(Scheme::Lrp, rate, rate)
    }

    pub fn lrep(reward: S, penalty: S) -> Result<Self, ParamError> {
        Self::new(Scheme::Lrep, reward, penalty)
    }

    pub fn reward(&self) -> S {
        self.reward
    }

    pub fn penalty(&self) -> S {
        self.penalty
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }
}

/// Action probability vector plus the scheme that updates it.
///
/// Updates are value-semantic: [`apply_reward`](Self::apply_reward) and
/// [`apply_penalty`](Self::apply_penalty) return the next state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AutomatonState<S> {
    probs: [S; Action::COUNT],
    params: LearningParams<S>,
}

impl<S: Scalar> AutomatonState<S> {
    /// Uniform start, `(0.5, 0.5)`.
    pub fn uniform(params: LearningParams<S>) -> Self {
        let half = S::of(0.5);
        Self { probs: [half, half], params }
    }

    /// Starts from an explicit `p_active`; `p_idle` is its complement.
    ///
    /// Panics if `p_active` is not in `[0, 1]`.
    pub fn with_active_probability(params: LearningParams<S>, p_active: S) -> Self {
        assert!(
            p_active >= S::zero() && p_active <= S::one(),
            "probability {p_active} outside [0, 1]"
        );
        Self { probs: [p_active, S::one() - p_active], params }
    }

    pub fn probability(&self, action: Action) -> S {
        self.probs[action.index()]
    }

    pub fn p_active(&self) -> S {
        self.probability(Action::Active)
    }

    pub fn params(&self) -> &LearningParams<S> {
        &self.params
    }

    /// Samples an action from the vector using exactly one uniform draw.
    pub fn select_action<R: Rng + ?Sized>(&self, rng: &mut R) -> Action {
        let u: f64 = rng.random();
        if u < self.p_active().as_f64() {
            Action::Active
        } else {
            Action::Idle
        }
    }

    /// `p_c += a (1 - p_c)`, every other `p_j *= 1 - a`.
    #[must_use]
    pub fn apply_reward(&self, chosen: Action) -> Self {
        let a = self.params.reward;
        let mut probs = self.probs;
        for (i, p) in probs.iter_mut().enumerate() {
            *p = if i == chosen.index() {
                *p + a * (S::one() - *p)
            } else {
                (S::one() - a) * *p
            };
        }
        Self { probs, params: self.params }
    }

    /// `p_c *= 1 - b`, every other `p_j = b / (r - 1) + (1 - b) p_j`.
    #[must_use]
    pub fn apply_penalty(&self, chosen: Action) -> Self {
        let b = self.params.penalty;
        let share = b / S::of_count(Action::COUNT - 1);
        let mut probs = self.probs;
        for (i, p) in probs.iter_mut().enumerate() {
            *p = if i == chosen.index() {
                (S::one() - b) * *p
            } else {
                share + (S::one() - b) * *p
            };
        }
        Self { probs, params: self.params }
    }

    #[must_use]
    pub fn apply(&self, chosen: Action, signal: Signal) -> Self {
        match signal {
            Signal::Reward => self.apply_reward(chosen),
            Signal::Penalty => self.apply_penalty(chosen),
        }
    }

    /// True iff some action's probability is at least `threshold`.
    pub fn converged(&self, threshold: S) -> bool {
        self.probs.iter().any(|&p| p >= threshold)
    }

    pub fn reset(&mut self) {
        *self = Self::uniform(self.params);
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn lrp(rate: f64) -> LearningParams<f64> {
        LearningParams::lrp(rate).unwrap()
    }

    fn state(p_active: f64, rate: f64) -> AutomatonState<f64> {
        AutomatonState::with_active_probability(lrp(rate), p_active)
    }

    #[test]
    fn degenerate_vectors_select_deterministically() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let always = state(1.0, 0.1);
        let never = state(0.0, 0.1);
        for _ in 0..1000 {
            assert_eq!(always.select_action(&mut rng), Action::Active);
            assert_eq!(never.select_action(&mut rng), Action::Idle);
        }
    }

    #[test]
    fn select_consumes_one_draw() {
        let s = state(0.3, 0.1);
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        s.select_action(&mut a);
        let _: f64 = b.random();
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn reward_spot_values() {
        let next = state(0.5, 0.1).apply_reward(Action::Active);
        assert_abs_diff_eq!(next.p_active(), 0.55, epsilon = 1e-12);
        assert_abs_diff_eq!(next.probability(Action::Idle), 0.45, epsilon = 1e-12);

        let fixed = state(1.0, 0.3).apply_reward(Action::Active);
        assert_eq!(fixed.p_active(), 1.0);
        assert_eq!(fixed.probability(Action::Idle), 0.0);
    }

    #[test]
    fn zero_reward_rate_is_identity() {
        let params = LearningParams::lri(0.0).unwrap();
        for p in [0.0, 0.13, 0.5, 0.97] {
            let s = AutomatonState::with_active_probability(params, p);
            assert_eq!(s.apply_reward(Action::Active), s);
            assert_eq!(s.apply_reward(Action::Idle), s);
        }
    }

    #[test]
    fn penalty_spot_values() {
        let next = state(0.8, 0.1).apply_penalty(Action::Active);
        assert_abs_diff_eq!(next.p_active(), 0.72, epsilon = 1e-12);
        assert_abs_diff_eq!(next.probability(Action::Idle), 0.28, epsilon = 1e-12);

        let half = state(0.5, 0.5).apply_penalty(Action::Active);
        assert_abs_diff_eq!(half.p_active(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(half.probability(Action::Idle), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn inaction_ignores_penalty() {
        let s = AutomatonState::with_active_probability(LearningParams::lri(0.2).unwrap(), 0.37);
        assert_eq!(s.apply_penalty(Action::Active), s);
        assert_eq!(s.apply_penalty(Action::Idle), s);
    }

    #[test]
    fn convergence_threshold_is_inclusive() {
        assert!(state(0.86, 0.1).converged(0.85));
        assert!(!state(0.5, 0.1).converged(0.85));
        assert!(state(0.85, 0.1).converged(0.85));
        assert!(state(0.1, 0.1).converged(0.85));
    }

    #[test]
    fn scheme_constraints() {
        assert!(LearningParams::new(Scheme::Lri, 0.1, 0.05).is_err());
        assert!(LearningParams::new(Scheme::Lrp, 0.1, 0.2).is_err());
        assert!(LearningParams::lrep(0.1, 0.01).is_ok());
        assert!(LearningParams::lrep(0.1, 0.02).is_err());
        assert!(LearningParams::lrep(0.1, 0.0).is_err());
        assert!(LearningParams::lrp(1.0).is_err());
        assert!(LearningParams::lrp(-0.1).is_err());
    }

    #[test]
    fn single_precision_updates() {
        let s = AutomatonState::with_active_probability(LearningParams::<f32>::lrp(0.1).unwrap(), 0.5);
        let next = s.apply_reward(Action::Active);
        assert_abs_diff_eq!(next.p_active(), 0.55f32, epsilon = 1e-6);
    }
}
