//! Experiment configuration: TOML ingestion, per-scenario defaults and
//! validation. Unknown keys are rejected; the fully resolved config can be
//! re-emitted and reloaded with identical behavior.

use crate::error::SimError;
use crate::geometry::{PlanarArray, Scene, SPEED_OF_LIGHT};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config value at `{field}`: {reason}")]
    Validation { field: String, reason: String },
    #[error(transparent)]
    Model(#[from] SimError),
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// The four canned experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    RisSizeSweep,
    MovingRx,
    InterferenceValidation,
    PowerComparison,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::RisSizeSweep => "ris-size-sweep",
            Scenario::MovingRx => "moving-rx",
            Scenario::InterferenceValidation => "interference-validation",
            Scenario::PowerComparison => "power-comparison",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ris-size-sweep" => Ok(Scenario::RisSizeSweep),
            "moving-rx" => Ok(Scenario::MovingRx),
            "interference-validation" => Ok(Scenario::InterferenceValidation),
            "power-comparison" => Ok(Scenario::PowerComparison),
            other => Err(format!("unknown scenario `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArray {
    n_x: Option<usize>,
    n_y: Option<usize>,
    position: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRis {
    n_x: Option<usize>,
    n_y: Option<usize>,
    position: Option<[f64; 3]>,
    boresight: Option<[f64; 3]>,
    up: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    frequency_hz: Option<f64>,
    absorption_coeff: Option<f64>,
    tx_power_w: Option<f64>,
    tx: Option<RawArray>,
    rx: Option<RawArray>,
    ris: Option<RawRis>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPopulation {
    mean_users: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    transmit_prob: Option<f64>,
    nonblocked_prob: Option<f64>,
    interferer_n_x: Option<usize>,
    interferer_n_y: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    ris_sides: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrajectory {
    start: Option<[f64; 3]>,
    end: Option<[f64; 3]>,
    waypoints: Option<usize>,
}

/// On-disk config shape: everything optional, defaults filled per scenario.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<Scenario>,
    master_seed: Option<u64>,
    n_realizations: Option<usize>,
    #[serde(default)]
    scene: RawScene,
    #[serde(default)]
    population: RawPopulation,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    trajectory: RawTrajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub n_x: usize,
    pub n_y: usize,
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RisConfig {
    pub n_x: usize,
    pub n_y: usize,
    pub position: [f64; 3],
    pub boresight: [f64; 3],
    pub up: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationConfig {
    pub mean_users: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub transmit_prob: f64,
    pub nonblocked_prob: f64,
    pub interferer_n_x: usize,
    pub interferer_n_y: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub start: [f64; 3],
    pub end: [f64; 3],
    pub waypoints: usize,
}

/// Fully resolved experiment configuration; every field concrete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub master_seed: u64,
    pub n_realizations: usize,
    pub frequency_hz: f64,
    pub absorption_coeff: f64,
    pub tx_power_w: f64,
    pub tx: ArrayConfig,
    pub rx: ArrayConfig,
    pub ris: RisConfig,
    pub population: PopulationConfig,
    pub ris_sides: Vec<usize>,
    pub trajectory: TrajectoryConfig,
}

impl ExperimentConfig {
    /// Documented defaults for each scenario, at desk scale. The paper-scale
    /// ensembles (4000 users over 1000 realizations) are opt-in via the CLI.
    pub fn defaults(scenario: Scenario) -> Self {
        // Shared geometry: wall-mounted RIS at the origin facing +y, desired
        // Tx and Rx 2.83 m away at 90 degrees around it.
        let base = ExperimentConfig {
            scenario,
            master_seed: 1,
            n_realizations: 500,
            frequency_hz: 140e9,
            absorption_coeff: 0.0,
            tx_power_w: 1.0,
            tx: ArrayConfig {
                n_x: 4,
                n_y: 4,
                position: [-2.0, 2.0, 0.0],
            },
            rx: ArrayConfig {
                n_x: 4,
                n_y: 4,
                position: [2.0, 2.0, 0.0],
            },
            ris: RisConfig {
                n_x: 64,
                n_y: 64,
                position: [0.0, 0.0, 0.0],
                boresight: [0.0, 1.0, 0.0],
                up: [0.0, 0.0, 1.0],
            },
            population: PopulationConfig {
                mean_users: 10.0,
                r_min: 0.1,
                r_max: 10.0,
                transmit_prob: 1.0,
                nonblocked_prob: 1.0,
                interferer_n_x: 4,
                interferer_n_y: 4,
            },
            ris_sides: vec![2, 4, 8, 16, 32, 64],
            // Ends just in front of the wall, inside the break-down boundary
            // of the default 64x64 RIS.
            trajectory: TrajectoryConfig {
                start: [2.0, 8.0, 0.0],
                end: [2.0, 0.5, 0.0],
                waypoints: 31,
            },
        };
        match scenario {
            Scenario::RisSizeSweep => ExperimentConfig {
                ris_sides: vec![2, 4, 8, 12, 16, 24, 32, 48, 64, 96, 128, 160, 200],
                ..base
            },
            Scenario::MovingRx => ExperimentConfig {
                // The Tx sits well outside the 64x64 RIS near field so that
                // residual model error along the trajectory is dominated by
                // the Rx-side distance alone.
                tx: ArrayConfig {
                    n_x: 16,
                    n_y: 16,
                    position: [-6.0, 6.0, 0.0],
                },
                rx: ArrayConfig {
                    n_x: 32,
                    n_y: 32,
                    position: [2.0, 2.0, 0.0],
                },
                ..base
            },
            Scenario::InterferenceValidation => ExperimentConfig {
                ris_sides: vec![4, 8, 16],
                population: PopulationConfig {
                    mean_users: 200.0,
                    r_max: 2.0,
                    ..base.population
                },
                ..base
            },
            Scenario::PowerComparison => ExperimentConfig {
                ris_sides: (1..=32).map(|k| 2 * k).collect(),
                ..base
            },
        }
    }

    /// Opt into the paper's full ensemble sizes.
    pub fn apply_paper_scale(&mut self) {
        if self.scenario == Scenario::InterferenceValidation {
            self.population.mean_users = 4000.0;
            self.n_realizations = 1000;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.frequency_hz > 0.0) {
            return Err(invalid("scene.frequency_hz", "frequency must be > 0"));
        }
        if !(self.absorption_coeff >= 0.0) {
            return Err(invalid("scene.absorption_coeff", "must be >= 0"));
        }
        if !(self.tx_power_w > 0.0) {
            return Err(invalid("scene.tx_power_w", "must be > 0"));
        }
        for (name, a) in [("scene.tx", &self.tx), ("scene.rx", &self.rx)] {
            if a.n_x < 1 || a.n_y < 1 {
                return Err(invalid(name, "element counts must be >= 1"));
            }
        }
        if self.ris.n_x < 1 || self.ris.n_y < 1 {
            return Err(invalid("scene.ris", "element counts must be >= 1"));
        }
        let p = &self.population;
        if !(p.mean_users >= 0.0) {
            return Err(invalid("population.mean_users", "must be >= 0"));
        }
        if !(p.r_min > 0.0 && p.r_max > p.r_min) {
            return Err(invalid("population", "require 0 < r_min < r_max"));
        }
        for (name, v) in [
            ("population.transmit_prob", p.transmit_prob),
            ("population.nonblocked_prob", p.nonblocked_prob),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(name, "must be in [0, 1]"));
            }
        }
        if p.interferer_n_x < 1 || p.interferer_n_y < 1 {
            return Err(invalid("population.interferer_n_x/n_y", "must be >= 1"));
        }
        if self.ris_sides.is_empty() {
            return Err(invalid("sweep.ris_sides", "sweep range must be nonempty"));
        }
        if self.ris_sides.iter().any(|&s| s < 1) {
            return Err(invalid("sweep.ris_sides", "sides must be >= 1"));
        }
        if self.trajectory.waypoints < 2 {
            return Err(invalid("trajectory.waypoints", "need at least 2 waypoints"));
        }
        if self.n_realizations < 1 {
            return Err(invalid("n_realizations", "must be >= 1"));
        }
        if self.master_seed == u64::MAX {
            return Err(invalid("master_seed", "u64::MAX is reserved"));
        }
        Ok(())
    }

    /// Half-wavelength element pitch used for every array.
    pub fn spacing(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz / 2.0
    }

    pub fn ris_array(&self) -> Result<PlanarArray, SimError> {
        PlanarArray::new(
            self.ris.n_x,
            self.ris.n_y,
            self.spacing(),
            self.ris.position.into(),
            self.ris.boresight.into(),
            self.ris.up.into(),
        )
    }

    /// Scene with the configured nodes; Tx and Rx face the RIS center.
    pub fn scene(&self) -> Result<Scene, SimError> {
        self.scene_with(self.ris.n_x, self.ris.n_y, self.rx.position.into())
    }

    /// Scene with an overridden (square) RIS side, for sweeps.
    pub fn scene_with_ris_side(&self, side: usize) -> Result<Scene, SimError> {
        self.scene_with(side, side, self.rx.position.into())
    }

    /// Scene with an overridden Rx position, for trajectories.
    pub fn scene_with_rx_at(&self, rx_pos: Vec3) -> Result<Scene, SimError> {
        self.scene_with(self.ris.n_x, self.ris.n_y, rx_pos)
    }

    fn scene_with(&self, ris_n_x: usize, ris_n_y: usize, rx_pos: Vec3) -> Result<Scene, SimError> {
        let d = self.spacing();
        let ris = PlanarArray::new(
            ris_n_x,
            ris_n_y,
            d,
            self.ris.position.into(),
            self.ris.boresight.into(),
            self.ris.up.into(),
        )?;
        let tx = PlanarArray::facing(
            self.tx.n_x,
            self.tx.n_y,
            d,
            self.tx.position.into(),
            ris.origin(),
        )?;
        let rx = PlanarArray::facing(self.rx.n_x, self.rx.n_y, d, rx_pos, ris.origin())?;
        Scene::new(
            tx,
            rx,
            ris,
            self.frequency_hz,
            self.absorption_coeff,
            self.tx_power_w,
        )
    }

    pub fn population(&self, oriented_at_ris: bool) -> Result<crate::analytic::StochasticPopulation, SimError> {
        crate::analytic::StochasticPopulation::from_mean_count(
            self.population.mean_users,
            self.population.transmit_prob,
            self.population.nonblocked_prob,
            self.population.r_min,
            self.population.r_max,
            oriented_at_ris,
        )
    }

    /// Effective config as TOML; reloading it reproduces this config.
    pub fn effective_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    fn from_raw(raw: RawConfig, scenario: Scenario) -> Result<Self, ConfigError> {
        if let Some(s) = raw.scenario {
            if s != scenario {
                return Err(invalid(
                    "scenario",
                    format!("config is for `{s}`, requested `{scenario}`"),
                ));
            }
        }
        let mut cfg = ExperimentConfig::defaults(scenario);
        if let Some(v) = raw.master_seed {
            cfg.master_seed = v;
        }
        if let Some(v) = raw.n_realizations {
            cfg.n_realizations = v;
        }
        let s = raw.scene;
        if let Some(v) = s.frequency_hz {
            cfg.frequency_hz = v;
        }
        if let Some(v) = s.absorption_coeff {
            cfg.absorption_coeff = v;
        }
        if let Some(v) = s.tx_power_w {
            cfg.tx_power_w = v;
        }
        for (raw_arr, dst) in [(s.tx, &mut cfg.tx), (s.rx, &mut cfg.rx)] {
            if let Some(a) = raw_arr {
                if let Some(v) = a.n_x {
                    dst.n_x = v;
                }
                if let Some(v) = a.n_y {
                    dst.n_y = v;
                }
                if let Some(v) = a.position {
                    dst.position = v;
                }
            }
        }
        if let Some(r) = s.ris {
            if let Some(v) = r.n_x {
                cfg.ris.n_x = v;
            }
            if let Some(v) = r.n_y {
                cfg.ris.n_y = v;
            }
            if let Some(v) = r.position {
                cfg.ris.position = v;
            }
            if let Some(v) = r.boresight {
                cfg.ris.boresight = v;
            }
            if let Some(v) = r.up {
                cfg.ris.up = v;
            }
        }
        let p = raw.population;
        if let Some(v) = p.mean_users {
            cfg.population.mean_users = v;
        }
        if let Some(v) = p.r_min {
            cfg.population.r_min = v;
        }
        if let Some(v) = p.r_max {
            cfg.population.r_max = v;
        }
        if let Some(v) = p.transmit_prob {
            cfg.population.transmit_prob = v;
        }
        if let Some(v) = p.nonblocked_prob {
            cfg.population.nonblocked_prob = v;
        }
        if let Some(v) = p.interferer_n_x {
            cfg.population.interferer_n_x = v;
        }
        if let Some(v) = p.interferer_n_y {
            cfg.population.interferer_n_y = v;
        }
        if let Some(v) = raw.sweep.ris_sides {
            cfg.ris_sides = v;
        }
        let t = raw.trajectory;
        if let Some(v) = t.start {
            cfg.trajectory.start = v;
        }
        if let Some(v) = t.end {
            cfg.trajectory.end = v;
        }
        if let Some(v) = t.waypoints {
            cfg.trajectory.waypoints = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parse a config string for the given scenario; missing keys take the
/// scenario defaults, unknown keys are rejected.
pub fn parse_config(text: &str, scenario: Scenario) -> Result<ExperimentConfig, ConfigError> {
    // The resolved (effective) config shape is accepted too: it is a strict
    // superset of the raw key set only through `scenario`, so try raw first.
    let raw: RawConfig = match toml::from_str(text) {
        Ok(raw) => raw,
        Err(first_err) => {
            // Fall back to the effective-config shape emitted by
            // `effective_toml`.
            match toml::from_str::<ExperimentConfig>(text) {
                Ok(full) => {
                    if full.scenario != scenario {
                        return Err(invalid(
                            "scenario",
                            format!("config is for `{}`, requested `{scenario}`", full.scenario),
                        ));
                    }
                    full.validate()?;
                    return Ok(full);
                }
                Err(_) => return Err(ConfigError::Parse(first_err.to_string())),
            }
        }
    };
    ExperimentConfig::from_raw(raw, scenario)
}

pub fn load_config(path: &Path, scenario: Scenario) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = parse_config("", Scenario::PowerComparison).unwrap();
        assert_eq!(cfg, ExperimentConfig::defaults(Scenario::PowerComparison));
        assert_eq!(cfg.population.mean_users, 10.0);
        assert_eq!(cfg.population.r_max, 10.0);
        assert_eq!(cfg.ris_sides.last(), Some(&64));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("bogus_key = 1\n", Scenario::PowerComparison).unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)), "{err}");
        let err = parse_config(
            "[scene]\nfrequency_ghz = 140\n",
            Scenario::PowerComparison,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)));
    }

    #[test]
    fn negative_frequency_names_the_field() {
        let err = parse_config(
            "[scene]\nfrequency_hz = -1.0\n",
            Scenario::PowerComparison,
        )
        .unwrap_err();
        match err {
            ConfigError::Validation { field, .. } => assert!(field.contains("frequency")),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn effective_config_round_trips() {
        let text = "[population]\nmean_users = 33.0\n[scene]\nabsorption_coeff = 0.02\n";
        let cfg = parse_config(text, Scenario::InterferenceValidation).unwrap();
        let echoed = cfg.effective_toml();
        let reloaded = parse_config(&echoed, Scenario::InterferenceValidation).unwrap();
        assert_eq!(cfg, reloaded);
    }

    #[test]
    fn scenario_mismatch_is_an_error() {
        let cfg = ExperimentConfig::defaults(Scenario::MovingRx);
        let echoed = cfg.effective_toml();
        assert!(parse_config(&echoed, Scenario::PowerComparison).is_err());
    }

    #[test]
    fn paper_scale_upscales_the_validation_ensemble() {
        let mut cfg = ExperimentConfig::defaults(Scenario::InterferenceValidation);
        cfg.apply_paper_scale();
        assert_eq!(cfg.population.mean_users, 4000.0);
        assert_eq!(cfg.n_realizations, 1000);
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let err = parse_config("[sweep]\nris_sides = []\n", Scenario::RisSizeSweep).unwrap_err();
        assert!(matches!(err, ConfigError::Validation { .. }));
    }
}
