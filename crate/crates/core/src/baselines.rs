//! Centralised comparison points: the simple Greedy-MSC scheduler, a
//! per-target energy upper bound on lifetime, and an exact disjoint-cover
//! count for small instances.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::network::{Deployment, TargetSet};
use crate::scalar::{can_afford, Scalar};

/// Largest sensor count the exhaustive oracle accepts.
pub const EXHAUSTIVE_MAX_SENSORS: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search limited to {max} sensors, instance has {n}")]
    InstanceTooLarge { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverSchedule<S> {
    /// Each cover's sensors (in pick order) and how long it runs.
    pub covers: Vec<(Vec<usize>, S)>,
    pub total_lifetime: S,
}

/// Greedy maximum-set-cover schedule.
///
/// While every target is seen by some sensor that can still afford a slice
/// of length `w`, one cover is built by repeatedly taking the eligible sensor
/// that sees the most still-uncovered targets (ties: more residual energy,
/// then lower id). The cover runs for `w` and each member pays
/// `w · sense_rate`. With no targets the schedule is empty.
pub fn greedy_msc_schedule<S: Scalar>(
    d: &Deployment<S>,
    batteries: &[S],
    w: S,
    sense_rate: S,
) -> CoverSchedule<S> {
    assert_eq!(batteries.len(), d.n_sensors(), "one battery per sensor");
    assert!(w > S::zero(), "slice length must be positive");
    let mut residual = batteries.to_vec();
    let cost = w * sense_rate;
    let mut covers = Vec::new();
    if d.n_targets() == 0 {
        return CoverSchedule { covers, total_lifetime: S::zero() };
    }
    loop {
        let eligible: Vec<usize> = (0..d.n_sensors()).filter(|&i| can_afford(residual[i], cost)).collect();
        if !d.is_coverable(eligible.iter().copied()) {
            break;
        }
        let mut uncovered = d.all_targets();
        let mut picked = vec![false; d.n_sensors()];
        let mut cover = Vec::new();
        while uncovered.count_ones(..) > 0 {
            let (id, _) = eligible
                .iter()
                .copied()
                .filter(|&i| !picked[i])
                .map(|i| (i, d.covered_by(i).intersection_count(&uncovered)))
                .filter(|&(_, gain)| gain > 0)
                .max_by(|a, b| {
                    a.1.cmp(&b.1)
                        .then_with(|| residual[a.0].partial_cmp(&residual[b.0]).expect("finite residuals"))
                        .then_with(|| b.0.cmp(&a.0))
                })
                .expect("eligible sensors cover every target");
            picked[id] = true;
            uncovered.difference_with(d.covered_by(id));
            cover.push(id);
        }
        debug_assert!(d.is_coverable(cover.iter().copied()));
        for &id in &cover {
            residual[id] = (residual[id] - cost).max(S::zero());
        }
        covers.push((cover, w));
    }
    let total_lifetime = S::of_count(covers.len()) * w;
    CoverSchedule { covers, total_lifetime }
}

/// `min_t Σ_{i sees t} battery_i / sense_rate`: no schedule can keep target
/// `t` watched longer than its watchers' combined active time. Zero if any
/// target is unwatched; infinite when there are no targets.
pub fn lifetime_upper_bound<S: Scalar>(d: &Deployment<S>, batteries: &[S], sense_rate: S) -> S {
    assert_eq!(batteries.len(), d.n_sensors(), "one battery per sensor");
    assert!(sense_rate > S::zero(), "sense_rate must be positive");
    let mut per_target = vec![S::zero(); d.n_targets()];
    for (i, &b) in batteries.iter().enumerate() {
        for t in d.covered_by(i).ones() {
            per_target[t] = per_target[t] + b;
        }
    }
    per_target.into_iter().map(|e| e / sense_rate).fold(S::infinity(), S::min)
}

/// Exact maximum number of pairwise-disjoint sensor subsets that each cover
/// every target. With no targets every single sensor is its own cover.
pub fn exhaustive_max_disjoint_covers<S: Scalar>(d: &Deployment<S>) -> Result<usize, OracleError> {
    let n = d.n_sensors();
    if n > EXHAUSTIVE_MAX_SENSORS {
        return Err(OracleError::InstanceTooLarge { n, max: EXHAUSTIVE_MAX_SENSORS });
    }
    if d.n_targets() == 0 {
        return Ok(n);
    }
    let sets: Vec<&TargetSet> = (0..n).map(|i| d.covered_by(i)).collect();
    let full = d.n_targets();
    let mut covers_mask = vec![false; 1 << n];
    for (mask, slot) in covers_mask.iter_mut().enumerate() {
        let mut acc = TargetSet::with_capacity(full);
        for (i, set) in sets.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc.union_with(set);
            }
        }
        *slot = acc.count_ones(..) == full;
    }
    // Any disjoint family can be shrunk to minimal covers.
    let minimal: Vec<u32> = (1u32..(1 << n))
        .filter(|&m| covers_mask[m as usize])
        .filter(|&m| (0..n).all(|i| m & (1 << i) == 0 || !covers_mask[(m & !(1 << i)) as usize]))
        .collect();
    let mut memo = HashMap::new();
    Ok(pack(((1u32 << n) - 1) as u32, &minimal, &covers_mask, &mut memo))
}

/// Most disjoint minimal covers inside `available`. Branches on the lowest
/// available sensor: leave it out, or use it in some minimal cover.
fn pack(available: u32, minimal: &[u32], covers_mask: &[bool], memo: &mut HashMap<u32, usize>) -> usize {
    if available == 0 || !covers_mask[available as usize] {
        return 0;
    }
    if let Some(&v) = memo.get(&available) {
        return v;
    }
    let low = available & available.wrapping_neg();
    let mut best = pack(available & !low, minimal, covers_mask, memo);
    for &c in minimal {
        if c & low != 0 && c & !available == 0 {
            best = best.max(1 + pack(available & !c, minimal, covers_mask, memo));
        }
    }
    memo.insert(available, best);
    best
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::network::{Point2, SensorSpec, TargetSpec};

    /// s0 sees {t0, t1}, s1 sees {t0}, s2 sees {t1}.
    pub(crate) fn three_sensor() -> Deployment<f64> {
        let s = |id, x| SensorSpec { id, pos: Point2::new(x, 0.0), sensing_range: if id == 0 { 60.0 } else { 10.0 } };
        Deployment::new(
            500.0,
            vec![s(0, 50.0), s(1, 0.0), s(2, 100.0)],
            vec![
                TargetSpec { id: 0, pos: Point2::new(0.0, 0.0) },
                TargetSpec { id: 1, pos: Point2::new(100.0, 0.0) },
            ],
            200.0,
        )
        .unwrap()
    }

    fn stacked(n: usize, m: usize) -> Deployment<f64> {
        let sensors = (0..n).map(|id| SensorSpec { id, pos: Point2::new(10.0, 10.0), sensing_range: 50.0 }).collect();
        let targets = (0..m).map(|id| TargetSpec { id, pos: Point2::new(10.0 + id as f64, 10.0) }).collect();
        Deployment::new(100.0, sensors, targets, 100.0).unwrap()
    }

    #[test]
    fn greedy_three_sensor() {
        let d = three_sensor();
        let schedule = greedy_msc_schedule(&d, &[1.0; 3], 0.2, 1.0);
        assert_eq!(schedule.covers.len(), 10);
        for (cover, w) in &schedule.covers[..5] {
            assert_eq!(cover, &vec![0]);
            assert_eq!(*w, 0.2);
        }
        for (cover, _) in &schedule.covers[5..] {
            assert_eq!(cover, &vec![1, 2]);
        }
        assert_relative_eq!(schedule.total_lifetime, 2.0);
    }

    #[test]
    fn greedy_with_unwatched_target() {
        let mut d = three_sensor();
        d = Deployment::new(
            d.area_side(),
            d.sensors().to_vec(),
            vec![TargetSpec { id: 0, pos: Point2::new(400.0, 400.0) }],
            d.comm_radius(),
        )
        .unwrap();
        let schedule = greedy_msc_schedule(&d, &[1.0; 3], 0.2, 1.0);
        assert!(schedule.covers.is_empty());
        assert_eq!(schedule.total_lifetime, 0.0);
        assert_eq!(lifetime_upper_bound(&d, &[1.0; 3], 1.0), 0.0);
        assert_eq!(exhaustive_max_disjoint_covers(&d).unwrap(), 0);
    }

    #[test]
    fn greedy_single_sensor_exhausts() {
        let d = stacked(1, 3);
        let schedule = greedy_msc_schedule(&d, &[1.0], 0.2, 1.0);
        assert_eq!(schedule.covers.len(), 5);
        assert_relative_eq!(schedule.total_lifetime, 1.0);
    }

    #[test]
    fn upper_bound_values() {
        assert_relative_eq!(lifetime_upper_bound(&three_sensor(), &[1.0; 3], 1.0), 2.0);
        assert_relative_eq!(lifetime_upper_bound(&stacked(4, 3), &[1.0; 4], 1.0), 4.0);
        assert!(lifetime_upper_bound(&stacked(2, 0), &[1.0; 2], 1.0).is_infinite());
    }

    #[test]
    fn exhaustive_values() {
        assert_eq!(exhaustive_max_disjoint_covers(&three_sensor()).unwrap(), 2);
        assert_eq!(exhaustive_max_disjoint_covers(&stacked(6, 2)).unwrap(), 6);
        assert_eq!(exhaustive_max_disjoint_covers(&stacked(3, 0)).unwrap(), 3);

        // One sensor sees everything, the rest see nothing.
        let mut sensors = vec![SensorSpec { id: 0, pos: Point2::new(0.0, 0.0), sensing_range: 10.0 }];
        sensors.extend((1..4).map(|id| SensorSpec { id, pos: Point2::new(90.0, 90.0), sensing_range: 1.0 }));
        let d = Deployment::new(
            100.0,
            sensors,
            vec![TargetSpec { id: 0, pos: Point2::new(1.0, 1.0) }, TargetSpec { id: 1, pos: Point2::new(2.0, 0.0) }],
            20.0,
        )
        .unwrap();
        assert_eq!(exhaustive_max_disjoint_covers(&d).unwrap(), 1);
    }

    #[test]
    fn exhaustive_rejects_large() {
        assert_eq!(
            exhaustive_max_disjoint_covers(&stacked(16, 1)),
            Err(OracleError::InstanceTooLarge { n: 16, max: EXHAUSTIVE_MAX_SENSORS })
        );
        assert_eq!(exhaustive_max_disjoint_covers(&stacked(15, 1)).unwrap(), 15);
    }

    #[test]
    fn greedy_is_deterministic() {
        let d = three_sensor();
        let a = greedy_msc_schedule(&d, &[0.7, 1.0, 0.9], 0.2, 1.0);
        let b = greedy_msc_schedule(&d, &[0.7, 1.0, 0.9], 0.2, 1.0);
        assert_eq!(a, b);
    }
}
