//! Field geometry: sensor and target placement, the sensor→target coverage
//! incidence, and the radio neighbour relation.

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Set of target ids.
pub type TargetSet = FixedBitSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn distance_sq(&self, other: &Self) -> S {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Self) -> S {
        self.distance_sq(other).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensorSpec<S> {
    pub id: usize,
    pub pos: Point2<S>,
    pub sensing_range: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetSpec<S> {
    pub id: usize,
    pub pos: Point2<S>,
}

/// Closed-disk sensing: the boundary counts as covered.
pub fn covers<S: Scalar>(sensor: &SensorSpec<S>, target: &TargetSpec<S>) -> bool {
    sensor.pos.distance_sq(&target.pos) <= sensor.sensing_range * sensor.sensing_range
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeploymentError {
    #[error("sensor at index {index} has id {id}; ids must be 0..N-1 in order")]
    SensorId { index: usize, id: usize },
    #[error("target at index {index} has id {id}; ids must be 0..M-1 in order")]
    TargetId { index: usize, id: usize },
    #[error("{what} must be finite and positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("non-finite coordinate on {what} {id}")]
    Coordinate { what: &'static str, id: usize },
    #[error("comm_radius {comm_radius} is below the largest sensing range {max_range}")]
    CommRadius { comm_radius: f64, max_range: f64 },
}

/// Immutable deployment plus its precomputed coverage incidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deployment<S> {
    area_side: S,
    sensors: Vec<SensorSpec<S>>,
    targets: Vec<TargetSpec<S>>,
    comm_radius: S,
    #[serde(serialize_with = "serialize_incidence")]
    incidence: Vec<TargetSet>,
}

fn serialize_incidence<Ser: serde::Serializer>(
    incidence: &[TargetSet],
    ser: Ser,
) -> Result<Ser::Ok, Ser::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(incidence.len()))?;
    for set in incidence {
        seq.serialize_element(&set.ones().collect::<Vec<_>>())?;
    }
    seq.end()
}

impl<S: Scalar> Deployment<S> {
    pub fn new(
        area_side: S,
        sensors: Vec<SensorSpec<S>>,
        targets: Vec<TargetSpec<S>>,
        comm_radius: S,
    ) -> Result<Self, DeploymentError> {
        positive("area_side", area_side)?;
        positive("comm_radius", comm_radius)?;
        let mut max_range = S::zero();
        for (index, s) in sensors.iter().enumerate() {
            if s.id != index {
                return Err(DeploymentError::SensorId { index, id: s.id });
            }
            if !(s.pos.x.is_finite() && s.pos.y.is_finite()) {
                return Err(DeploymentError::Coordinate { what: "sensor", id: s.id });
            }
            positive("sensing_range", s.sensing_range)?;
            max_range = max_range.max(s.sensing_range);
        }
        for (index, t) in targets.iter().enumerate() {
            if t.id != index {
                return Err(DeploymentError::TargetId { index, id: t.id });
            }
            if !(t.pos.x.is_finite() && t.pos.y.is_finite()) {
                return Err(DeploymentError::Coordinate { what: "target", id: t.id });
            }
        }
        if comm_radius < max_range {
            return Err(DeploymentError::CommRadius {
                comm_radius: comm_radius.as_f64(),
                max_range: max_range.as_f64(),
            });
        }
        let incidence = sensors
            .iter()
            .map(|s| {
                let mut set = TargetSet::with_capacity(targets.len());
                for t in targets.iter().filter(|t| covers(s, t)) {
                    set.insert(t.id);
                }
                set
            })
            .collect();
        Ok(Self { area_side, sensors, targets, comm_radius, incidence })
    }

    pub fn area_side(&self) -> S {
        self.area_side
    }

    pub fn comm_radius(&self) -> S {
        self.comm_radius
    }

    pub fn sensors(&self) -> &[SensorSpec<S>] {
        &self.sensors
    }

    pub fn targets(&self) -> &[TargetSpec<S>] {
        &self.targets
    }

    pub fn n_sensors(&self) -> usize {
        self.sensors.len()
    }

    pub fn n_targets(&self) -> usize {
        self.targets.len()
    }

    /// Targets inside sensor `id`'s sensing disk.
    pub fn covered_by(&self, id: usize) -> &TargetSet {
        &self.incidence[id]
    }

    pub fn sensor_distance(&self, a: usize, b: usize) -> S {
        self.sensors[a].pos.distance(&self.sensors[b].pos)
    }

    /// Symmetric, irreflexive adjacency: `j ∈ adj[i]` iff the two sensors are
    /// within `comm_radius`. Lists are sorted by id.
    pub fn neighbor_graph(&self) -> Vec<Vec<usize>> {
        let r2 = self.comm_radius * self.comm_radius;
        let n = self.sensors.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if self.sensors[i].pos.distance_sq(&self.sensors[j].pos) <= r2 {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        adj
    }

    /// Union of the coverage sets of the given sensors.
    pub fn coverage_of<I: IntoIterator<Item = usize>>(&self, sensors: I) -> TargetSet {
        let mut acc = TargetSet::with_capacity(self.targets.len());
        for id in sensors {
            acc.union_with(&self.incidence[id]);
        }
        acc
    }

    /// True iff every target is seen by at least one sensor in `alive`.
    pub fn is_coverable<I: IntoIterator<Item = usize>>(&self, alive: I) -> bool {
        self.coverage_of(alive).count_ones(..) == self.targets.len()
    }

    pub fn all_targets(&self) -> TargetSet {
        let mut all = TargetSet::with_capacity(self.targets.len());
        all.insert_range(..);
        all
    }
}

fn positive<S: Scalar>(what: &'static str, value: S) -> Result<(), DeploymentError> {
    if value.is_finite() && value > S::zero() {
        Ok(())
    } else {
        Err(DeploymentError::NonPositive { what, value: value.as_f64() })
    }
}

/// Uniform placement of sensors then targets on `[0, area_side]²`, all with
/// the same sensing range. Draw order is fixed: two draws per sensor
/// (x then y), then two per target.
pub fn deploy_random<S: Scalar, R: Rng + ?Sized>(
    area_side: S,
    n_sensors: usize,
    n_targets: usize,
    sensing_range: S,
    comm_radius: S,
    rng: &mut R,
) -> Result<Deployment<S>, DeploymentError> {
    let point = |rng: &mut R| {
        let x: f64 = rng.random();
        let y: f64 = rng.random();
        Point2::new(S::of(x) * area_side, S::of(y) * area_side)
    };
    let sensors = (0..n_sensors)
        .map(|id| SensorSpec { id, pos: point(rng), sensing_range })
        .collect();
    let targets = (0..n_targets).map(|id| TargetSpec { id, pos: point(rng) }).collect();
    Deployment::new(area_side, sensors, targets, comm_radius)
}

/// On-disk scenario with fixed geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub area_side: f64,
    pub sensors: Vec<ScenarioSensor>,
    pub targets: Vec<ScenarioTarget>,
    pub comm_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSensor {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub range: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioTarget {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Builds the deployment. Entries may appear in any order but ids must be
    /// dense.
    pub fn to_deployment<S: Scalar>(&self) -> Result<Deployment<S>, DeploymentError> {
        let mut sensors: Vec<_> = self
            .sensors
            .iter()
            .map(|s| SensorSpec {
                id: s.id,
                pos: Point2::new(S::of(s.x), S::of(s.y)),
                sensing_range: S::of(s.range),
            })
            .collect();
        sensors.sort_by_key(|s| s.id);
        let mut targets: Vec<_> = self
            .targets
            .iter()
            .map(|t| TargetSpec { id: t.id, pos: Point2::new(S::of(t.x), S::of(t.y)) })
            .collect();
        targets.sort_by_key(|t| t.id);
        Deployment::new(S::of(self.area_side), sensors, targets, S::of(self.comm_radius))
    }

    pub fn from_deployment<S: Scalar>(d: &Deployment<S>) -> Self {
        Self {
            area_side: d.area_side.as_f64(),
            sensors: d
                .sensors
                .iter()
                .map(|s| ScenarioSensor {
                    id: s.id,
                    x: s.pos.x.as_f64(),
                    y: s.pos.y.as_f64(),
                    range: s.sensing_range.as_f64(),
                })
                .collect(),
            targets: d
                .targets
                .iter()
                .map(|t| ScenarioTarget { id: t.id, x: t.pos.x.as_f64(), y: t.pos.y.as_f64() })
                .collect(),
            comm_radius: d.comm_radius.as_f64(),
        }
    }
}
