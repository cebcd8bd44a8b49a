//! Parameter sweeps over named presets or a custom grid, written as CSV.

use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::{Error, Result};
use crate::trials::{run_trials, TrialSummary};

pub const CSV_HEADER: &str = "algorithm,preset,n_sensors,n_targets,sensing_range,learning_rate,psi,trials,\
mean_lifetime,std_lifetime,min_lifetime,max_lifetime,mean_rounds,mean_learning_iters,master_seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Range 200..=600 step 100, N = 20, T ∈ {10, 20}.
    Fig3a,
    /// N = 6..=14 step 2, series (T = 15, R = 300) and (T = 30, R = 250).
    Fig3b,
    /// Range 100..=500 step 100, N = 40, T = 50.
    Fig4a,
    /// N = 30..=70 step 10, R = 300, T = 50.
    Fig4b,
    /// Range 200..=500 step 50, N = 40, T = 50, LAML and Greedy-MSC.
    Fig5a,
    /// N = 20..=80 step 10, R = 300, T = 50, LAML and Greedy-MSC.
    Fig5b,
    /// Learning rate ∈ {0.01, 0.1, 0.2, 0.4}, R = 250, N = 50, T = 25.
    Fig6,
}

impl Preset {
    pub const ALL: [Preset; 7] =
        [Preset::Fig3a, Preset::Fig3b, Preset::Fig4a, Preset::Fig4b, Preset::Fig5a, Preset::Fig5b, Preset::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig6 => "fig6",
        }
    }

    pub fn grids(self) -> Vec<Grid> {
        let laml = vec![Algorithm::Laml];
        let both = vec![Algorithm::Laml, Algorithm::GreedyMsc];
        let steps = |from: usize, to: usize, by: usize| (from..=to).step_by(by).collect::<Vec<_>>();
        let ranges = |from: usize, to: usize, by: usize| steps(from, to, by).into_iter().map(|r| r as f64).collect();
        match self {
            Preset::Fig3a => vec![Grid {
                n_sensors: vec![20],
                n_targets: vec![10, 20],
                sensing_range: ranges(200, 600, 100),
                algorithms: laml,
                ..Grid::default()
            }],
            Preset::Fig3b => vec![
                Grid {
                    n_sensors: steps(6, 14, 2),
                    n_targets: vec![15],
                    sensing_range: vec![300.0],
                    algorithms: laml.clone(),
                    ..Grid::default()
                },
                Grid {
                    n_sensors: steps(6, 14, 2),
                    n_targets: vec![30],
                    sensing_range: vec![250.0],
                    algorithms: laml,
                    ..Grid::default()
                },
            ],
            Preset::Fig4a => vec![Grid {
                n_sensors: vec![40],
                n_targets: vec![50],
                sensing_range: ranges(100, 500, 100),
                algorithms: laml,
                ..Grid::default()
            }],
            Preset::Fig4b => vec![Grid {
                n_sensors: steps(30, 70, 10),
                n_targets: vec![50],
                sensing_range: vec![300.0],
                algorithms: laml,
                ..Grid::default()
            }],
            Preset::Fig5a => vec![Grid {
                n_sensors: vec![40],
                n_targets: vec![50],
                sensing_range: ranges(200, 500, 50),
                algorithms: both,
                ..Grid::default()
            }],
            Preset::Fig5b => vec![Grid {
                n_sensors: steps(20, 80, 10),
                n_targets: vec![50],
                sensing_range: vec![300.0],
                algorithms: both,
                ..Grid::default()
            }],
            Preset::Fig6 => vec![Grid {
                n_sensors: vec![50],
                n_targets: vec![25],
                sensing_range: vec![250.0],
                learning_rate: vec![0.01, 0.1, 0.2, 0.4],
                algorithms: laml,
            }],
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Cartesian grid. An empty axis keeps the base configuration's value.
/// Points are visited with targets outermost, then range, sensors, learning
/// rate, and algorithm innermost.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grid {
    pub n_targets: Vec<usize>,
    pub sensing_range: Vec<f64>,
    pub n_sensors: Vec<usize>,
    pub learning_rate: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
}

impl Grid {
    pub fn points(&self, base: &ExperimentConfig) -> Vec<ExperimentConfig> {
        fn axis<T: Copy>(values: &[T], fallback: T) -> Vec<T> {
            if values.is_empty() {
                vec![fallback]
            } else {
                values.to_vec()
            }
        }
        let mut out = Vec::new();
        for &t in &axis(&self.n_targets, base.n_targets) {
            for &r in &axis(&self.sensing_range, base.sensing_range) {
                for &n in &axis(&self.n_sensors, base.n_sensors) {
                    for &a in &axis(&self.learning_rate, base.learning.a) {
                        for &algorithm in &axis(&self.algorithms, base.algorithm) {
                            out.push(ExperimentConfig {
                                n_targets: t,
                                sensing_range: r,
                                n_sensors: n,
                                learning: base.learning.with_rate(a),
                                algorithm,
                                ..base.clone()
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Custom sweep file: a base configuration and the grids to expand it over.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CustomSweep {
    pub base: ExperimentConfig,
    pub grids: Vec<Grid>,
}

pub enum SweepSpec {
    Preset(Preset),
    Custom(CustomSweep),
}

impl SweepSpec {
    pub fn label(&self) -> &'static str {
        match self {
            SweepSpec::Preset(p) => p.name(),
            SweepSpec::Custom(_) => "custom",
        }
    }

    /// Every grid point, with `base` supplying the fixed knobs for presets.
    pub fn points(&self, base: &ExperimentConfig) -> Vec<ExperimentConfig> {
        let (base, grids) = match self {
            SweepSpec::Preset(p) => (base, p.grids()),
            SweepSpec::Custom(c) => (&c.base, c.grids.clone()),
        };
        if grids.is_empty() {
            return vec![base.clone()];
        }
        grids.iter().flat_map(|g| g.points(base)).collect()
    }
}

/// One summary row per grid point, in grid order.
pub fn sweep(spec: &SweepSpec, base: &ExperimentConfig, jobs: usize) -> Result<Vec<TrialSummary>> {
    let points = spec.points(base);
    for p in &points {
        p.validate()?;
    }
    points.iter().map(|p| run_trials(p, spec.label(), jobs)).collect()
}

pub fn write_csv<W: Write>(rows: &[TrialSummary], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    if rows.is_empty() {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialSummary>> {
    let mut reader = csv::Reader::from_reader(input);
    Ok(reader.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn to_csv_string(rows: &[TrialSummary]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(p: Preset) -> usize {
        SweepSpec::Preset(p).points(&ExperimentConfig::default()).len()
    }

    #[test]
    fn preset_sizes() {
        assert_eq!(count(Preset::Fig5a), 14);
        assert_eq!(count(Preset::Fig5b), 14);
        assert_eq!(count(Preset::Fig6), 4);
        assert_eq!(count(Preset::Fig3a), 10);
        assert_eq!(count(Preset::Fig3b), 10);
        assert_eq!(count(Preset::Fig4a), 5);
        assert_eq!(count(Preset::Fig4b), 5);
    }

    #[test]
    fn fig5a_pairs_algorithms_per_range() {
        let points = SweepSpec::Preset(Preset::Fig5a).points(&ExperimentConfig::default());
        let ranges: Vec<f64> = points.iter().step_by(2).map(|p| p.sensing_range).collect();
        assert_eq!(ranges, vec![200.0, 250.0, 300.0, 350.0, 400.0, 450.0, 500.0]);
        assert!(points.iter().step_by(2).all(|p| p.algorithm == Algorithm::Laml));
        assert!(points.iter().skip(1).step_by(2).all(|p| p.algorithm == Algorithm::GreedyMsc));
        assert!(points.iter().all(|p| p.n_sensors == 40 && p.n_targets == 50));
    }

    #[test]
    fn fig6_moves_both_rates() {
        let points = SweepSpec::Preset(Preset::Fig6).points(&ExperimentConfig::default());
        let rates: Vec<(f64, f64)> = points.iter().map(|p| (p.learning.a, p.learning.b)).collect();
        assert_eq!(rates, vec![(0.01, 0.01), (0.1, 0.1), (0.2, 0.2), (0.4, 0.4)]);
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!("fig9".parse::<Preset>(), Err(Error::UnknownPreset(name)) if name == "fig9"));
        assert_eq!("fig3b".parse::<Preset>().unwrap(), Preset::Fig3b);
    }

    #[test]
    fn header_matches_summary_fields() {
        let csv = to_csv_string(&[]);
        assert_eq!(csv.trim_end(), CSV_HEADER);
        let row = TrialSummary {
            algorithm: "laml".into(),
            preset: "x".into(),
            n_sensors: 1,
            n_targets: 1,
            sensing_range: 1.0,
            learning_rate: 0.1,
            psi: 0.2,
            trials: 1,
            mean_lifetime: 0.1 + 0.2,
            std_lifetime: 0.0,
            min_lifetime: 1.0 / 3.0,
            max_lifetime: 1e-300,
            mean_rounds: 2.5,
            mean_learning_iters: 7.0,
            master_seed: u64::MAX,
        };
        let csv = to_csv_string(std::slice::from_ref(&row));
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(read_csv(csv.as_bytes()).unwrap(), vec![row]);
    }
}
