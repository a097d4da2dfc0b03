//! Run configuration.
//!
//! A single JSON document drives every subcommand. All sections are optional
//! and default to the reference deployment: 200 APs on a 2 km square, a 28 GHz
//! mmWave link with a 128-element DU array, and the published cost table.
//! Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cost::CostParams;
use crate::error::{ConfigError, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub scenario: ScenarioConfig,
    pub channel: ChannelConfig,
    pub cost: CostParams,
    pub solver: SolverConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            scenario: ScenarioConfig::default(),
            channel: ChannelConfig::default(),
            cost: CostParams::default(),
            solver: SolverConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

/// How hotspot spreads are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMode {
    /// Each hotspot draws its own spread.
    PerHotspot,
    /// One spread is drawn and shared by all hotspots.
    Common,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub num_aps: usize,
    pub num_dus: usize,
    pub region_side_m: f64,
    pub hotspots: usize,
    pub sigma_mode: SigmaMode,
    pub sigma_range_m: [f64; 2],
    /// Samples per axis of the grid used to find the traffic field extrema.
    pub grid_resolution: usize,
    pub x_min_bps: f64,
    pub x_max_bps: f64,
    /// Range of the backhaul load factor drawn per DU.
    pub beta_range: [f64; 2],
    pub kmeans_max_iters: usize,
    pub kmeans_tol_m: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            num_aps: 200,
            num_dus: 6,
            region_side_m: 2000.0,
            hotspots: 5,
            sigma_mode: SigmaMode::PerHotspot,
            sigma_range_m: [150.0, 400.0],
            grid_resolution: 200,
            x_min_bps: 0.1e9,
            x_max_bps: 10e9,
            beta_range: [0.8, 1.0],
            kmeans_max_iters: 100,
            kmeans_tol_m: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LosMode {
    AlwaysLos,
    Bernoulli { p_nlos: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub carrier_ghz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub n_du_antennas: usize,
    pub n_ap_antennas: usize,
    pub phase_bits: u32,
    pub noise_figure_db: f64,
    pub los_mode: LosMode,
    pub shadowing_enabled: bool,
    /// Widen the phase-shifter set from [0, pi) to [0, 2 pi).
    pub extend_phase_range: bool,
    pub fiber_rate_bps: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            carrier_ghz: 28.0,
            bandwidth_hz: 800e6,
            tx_power_w: 120.0,
            n_du_antennas: 128,
            n_ap_antennas: 1,
            phase_bits: 6,
            noise_figure_db: 7.0,
            los_mode: LosMode::AlwaysLos,
            shadowing_enabled: true,
            extend_phase_range: false,
            fiber_rate_bps: 10e9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Fraction of the DU backhaul rate the fronthaul must carry.
    pub alpha: f64,
    /// Slack in the OTN-count upper bound; must stay below 1 / otn_split.
    pub epsilon: f64,
    pub integrality_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha: 0.7,
            epsilon: 1e-6,
            integrality_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficLevel {
    pub name: String,
    pub hotspots: usize,
}

impl TrafficLevel {
    pub fn new(name: &str, hotspots: usize) -> Self {
        Self {
            name: name.to_string(),
            hotspots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub num_dus: Vec<usize>,
    pub traffic_levels: Vec<TrafficLevel>,
    pub realizations: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            num_dus: vec![2, 6, 10],
            traffic_levels: vec![
                TrafficLevel::new("low", 2),
                TrafficLevel::new("medium", 5),
                TrafficLevel::new("high", 9),
            ],
            realizations: 20,
        }
    }
}

fn check(cond: bool, field: &str, message: impl Into<String>) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(ConfigError::new(field, message))
    }
}

fn finite_positive(v: f64, field: &str) -> Result<(), ConfigError> {
    check(v.is_finite() && v > 0.0, field, format!("must be a finite positive number, got {v}"))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| ConfigError::new("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_json(&text)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_scenario()?;
        self.validate_channel()?;
        self.cost.validate()?;
        self.validate_solver()?;
        self.validate_sweep()
    }

    fn validate_scenario(&self) -> Result<(), ConfigError> {
        let s = &self.scenario;
        check(s.num_aps >= 1, "scenario.num_aps", "must be at least 1")?;
        check(s.num_dus >= 1, "scenario.num_dus", "must be at least 1")?;
        check(
            s.num_dus <= s.num_aps,
            "scenario.num_dus",
            format!("{} DUs exceed {} APs", s.num_dus, s.num_aps),
        )?;
        finite_positive(s.region_side_m, "scenario.region_side_m")?;
        check(s.hotspots >= 1, "scenario.hotspots", "must be at least 1")?;
        finite_positive(s.sigma_range_m[0], "scenario.sigma_range_m")?;
        check(
            s.sigma_range_m[0] <= s.sigma_range_m[1] && s.sigma_range_m[1].is_finite(),
            "scenario.sigma_range_m",
            "must be an ordered [lo, hi] pair",
        )?;
        check(s.grid_resolution >= 2, "scenario.grid_resolution", "must be at least 2")?;
        finite_positive(s.x_min_bps, "scenario.x_min_bps")?;
        finite_positive(s.x_max_bps, "scenario.x_max_bps")?;
        check(
            s.x_min_bps < s.x_max_bps,
            "scenario.x_max_bps",
            "must exceed scenario.x_min_bps",
        )?;
        let [lo, hi] = s.beta_range;
        check(
            lo > 0.0 && lo <= hi && hi <= 1.0,
            "scenario.beta_range",
            "must satisfy 0 < lo <= hi <= 1",
        )?;
        check(s.kmeans_max_iters >= 1, "scenario.kmeans_max_iters", "must be at least 1")?;
        check(
            s.kmeans_tol_m.is_finite() && s.kmeans_tol_m >= 0.0,
            "scenario.kmeans_tol_m",
            "must be a finite non-negative number",
        )
    }

    fn validate_channel(&self) -> Result<(), ConfigError> {
        let c = &self.channel;
        finite_positive(c.carrier_ghz, "channel.carrier_ghz")?;
        finite_positive(c.bandwidth_hz, "channel.bandwidth_hz")?;
        finite_positive(c.tx_power_w, "channel.tx_power_w")?;
        check(c.n_du_antennas >= 1, "channel.n_du_antennas", "must be at least 1")?;
        check(c.n_ap_antennas == 1, "channel.n_ap_antennas", "only single-antenna APs are modeled")?;
        check(
            (1..=16).contains(&c.phase_bits),
            "channel.phase_bits",
            "must lie in 1..=16",
        )?;
        check(c.noise_figure_db.is_finite(), "channel.noise_figure_db", "must be finite")?;
        if let LosMode::Bernoulli { p_nlos } = c.los_mode {
            check(
                (0.0..=1.0).contains(&p_nlos),
                "channel.los_mode.bernoulli.p_nlos",
                "must lie in [0, 1]",
            )?;
        }
        finite_positive(c.fiber_rate_bps, "channel.fiber_rate_bps")
    }

    fn validate_solver(&self) -> Result<(), ConfigError> {
        let s = &self.solver;
        check(
            s.alpha > 0.0 && s.alpha <= 1.0,
            "solver.alpha",
            "must satisfy 0 < alpha <= 1",
        )?;
        let theta = self.cost.otn_split as f64;
        check(
            s.epsilon > 0.0 && s.epsilon < 1.0 / theta,
            "solver.epsilon",
            format!("must satisfy 0 < epsilon < 1/otn_split = {}", 1.0 / theta),
        )?;
        check(
            s.integrality_tol > 0.0 && s.integrality_tol < 0.5,
            "solver.integrality_tol",
            "must lie in (0, 0.5)",
        )
    }

    fn validate_sweep(&self) -> Result<(), ConfigError> {
        let s = &self.sweep;
        check(!s.num_dus.is_empty(), "sweep.num_dus", "must not be empty")?;
        for &w in &s.num_dus {
            check(
                w >= 1 && w <= self.scenario.num_aps,
                "sweep.num_dus",
                format!("{w} DUs is outside 1..={}", self.scenario.num_aps),
            )?;
        }
        check(!s.traffic_levels.is_empty(), "sweep.traffic_levels", "must not be empty")?;
        for level in &s.traffic_levels {
            check(
                level.hotspots >= 1,
                "sweep.traffic_levels.hotspots",
                format!("level `{}` needs at least one hotspot", level.name),
            )?;
        }
        check(s.realizations >= 1, "sweep.realizations", "must be at least 1")
    }
}
