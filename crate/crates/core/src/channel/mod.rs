//! Fronthaul link capacities.
//!
//! Fiber links run at a constant rate. mmWave links use the 3GPP UMi street
//! canyon pathloss (LoS and NLoS slopes) with log-normal shadowing, a
//! half-wavelength uniform linear array at the DU, a single-antenna AP, and a
//! quantized-phase analog beamformer. Interference from other DUs is not
//! modeled.

pub mod beamforming;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::config::{ChannelConfig, LosMode};
use crate::error::{Error, Result};
use crate::rng::{substream, Stream};
use crate::scenario::{AccessPoint, DistributedUnit, Scenario};

pub use beamforming::{best_codeword, select_beamformer, Beamformer, PhaseCodebook};

pub const LOS_SHADOW_STD_DB: f64 = 4.0;
pub const NLOS_SHADOW_STD_DB: f64 = 8.2;
pub const MAX_NLOS_PATHS: usize = 6;
/// Closest AP-DU distance the pathloss model accepts.
pub const DISTANCE_FLOOR_M: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MmWaveParams {
    pub carrier_ghz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub n_du_antennas: usize,
    pub n_ap_antennas: usize,
    pub phase_bits: u32,
    pub noise_figure_db: f64,
    pub los_mode: LosMode,
    pub shadowing_enabled: bool,
    pub extend_phase_range: bool,
}

impl From<&ChannelConfig> for MmWaveParams {
    fn from(c: &ChannelConfig) -> Self {
        Self {
            carrier_ghz: c.carrier_ghz,
            bandwidth_hz: c.bandwidth_hz,
            tx_power_w: c.tx_power_w,
            n_du_antennas: c.n_du_antennas,
            n_ap_antennas: c.n_ap_antennas,
            phase_bits: c.phase_bits,
            noise_figure_db: c.noise_figure_db,
            los_mode: c.los_mode,
            shadowing_enabled: c.shadowing_enabled,
            extend_phase_range: c.extend_phase_range,
        }
    }
}

impl Default for MmWaveParams {
    fn default() -> Self {
        Self::from(&ChannelConfig::default())
    }
}

impl MmWaveParams {
    pub fn codebook(&self) -> PhaseCodebook {
        PhaseCodebook::new(self.phase_bits, self.extend_phase_range)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathComponent {
    pub gain: Complex64,
    /// Angle of departure from array broadside, radians.
    pub aod: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    pub entries: Vec<Complex64>,
    pub los: bool,
    pub paths: Vec<PathComponent>,
    pub pathloss_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub du_id: usize,
    pub ap_id: usize,
    pub distance_m: f64,
    pub fiber_rate: f64,
    pub mmwave_rate: f64,
    pub snr_db: f64,
    pub los: bool,
}

fn check_distance(distance_m: f64) -> Result<()> {
    if distance_m >= DISTANCE_FLOOR_M {
        Ok(())
    } else {
        Err(Error::DistanceBelowFloor(distance_m))
    }
}

pub fn pathloss_los(distance_m: f64, carrier_ghz: f64, shadow_db: f64) -> Result<f64> {
    check_distance(distance_m)?;
    Ok(32.4 + 21.0 * distance_m.log10() + 20.0 * carrier_ghz.log10() + shadow_db)
}

pub fn pathloss_nlos(distance_m: f64, carrier_ghz: f64, shadow_db: f64) -> Result<f64> {
    check_distance(distance_m)?;
    Ok(32.4 + 31.9 * distance_m.log10() + 20.0 * carrier_ghz.log10() + shadow_db)
}

/// Zero-mean Gaussian shadowing in dB, or exactly 0 when disabled.
pub fn sample_shadowing<R: Rng + ?Sized>(los: bool, enabled: bool, rng: &mut R) -> f64 {
    if !enabled {
        return 0.0;
    }
    let std = if los { LOS_SHADOW_STD_DB } else { NLOS_SHADOW_STD_DB };
    Normal::new(0.0, std).expect("positive std").sample(rng)
}

/// Half-wavelength ULA response toward `theta` (radians from broadside).
pub fn steering_vector(theta: f64, n: usize) -> Vec<Complex64> {
    let s = theta.sin();
    (0..n)
        .map(|k| Complex64::from_polar(1.0, PI * k as f64 * s))
        .collect()
}

/// Angle of `ap` from the broadside of an array laid along the x axis at `du`.
pub fn geometric_aod(du: &DistributedUnit, ap: &AccessPoint) -> f64 {
    let dx = ap.x - du.x;
    let d = du.position().dist2(ap.position()).sqrt();
    if d == 0.0 {
        0.0
    } else {
        (dx / d).clamp(-1.0, 1.0).asin()
    }
}

/// Draws the channel from `du` to `ap` at the given (already floored) distance.
pub fn sample_channel_at<R: Rng + ?Sized>(
    distance_m: f64,
    aod: f64,
    params: &MmWaveParams,
    rng: &mut R,
) -> Result<ChannelVector> {
    check_distance(distance_m)?;
    let n = params.n_du_antennas;
    let los = match params.los_mode {
        LosMode::AlwaysLos => true,
        LosMode::Bernoulli { p_nlos } => !rng.random_bool(p_nlos),
    };
    let shadow = sample_shadowing(los, params.shadowing_enabled, rng);
    if los {
        let pl = pathloss_los(distance_m, params.carrier_ghz, shadow)?;
        let amp = 10f64.powf(-pl / 20.0);
        let entries = steering_vector(aod, n).into_iter().map(|a| a * amp).collect();
        return Ok(ChannelVector {
            entries,
            los,
            paths: vec![PathComponent { gain: Complex64::new(amp, 0.0), aod }],
            pathloss_db: pl,
        });
    }
    let pl = pathloss_nlos(distance_m, params.carrier_ghz, shadow)?;
    let amp = 10f64.powf(-pl / 20.0);
    let count = rng.random_range(1..=MAX_NLOS_PATHS);
    let scale = amp / (count as f64).sqrt();
    let mut entries = vec![Complex64::new(0.0, 0.0); n];
    let mut paths = Vec::with_capacity(count);
    for _ in 0..count {
        let theta = rng.random_range(-PI / 2.0..=PI / 2.0);
        // Unit-variance circularly symmetric complex Gaussian.
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        let g = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
        for (e, a) in entries.iter_mut().zip(steering_vector(theta, n)) {
            *e += g * a * scale;
        }
        paths.push(PathComponent { gain: g * scale, aod: theta });
    }
    Ok(ChannelVector {
        entries,
        los,
        paths,
        pathloss_db: pl,
    })
}

pub fn sample_channel<R: Rng + ?Sized>(
    du: &DistributedUnit,
    ap: &AccessPoint,
    params: &MmWaveParams,
    rng: &mut R,
) -> Result<ChannelVector> {
    let d = du.position().dist2(ap.position()).sqrt();
    sample_channel_at(d, geometric_aod(du, ap), params, rng)
}

/// Thermal noise power in watts over `bandwidth_hz` at -174 dBm/Hz plus the
/// receiver noise figure.
pub fn noise_power(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    let dbm = -174.0 + 10.0 * bandwidth_hz.log10() + noise_figure_db;
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn snr(h: &[Complex64], f: &Beamformer, params: &MmWaveParams) -> f64 {
    let g = f.gain(h);
    params.tx_power_w * g * g / noise_power(params.bandwidth_hz, params.noise_figure_db)
}

pub fn shannon_rate(bandwidth_hz: f64, snr: f64) -> f64 {
    bandwidth_hz * snr.ln_1p() / std::f64::consts::LN_2
}

/// Achievable mmWave rate in bits/s.
pub fn mmwave_rate(h: &[Complex64], f: &Beamformer, params: &MmWaveParams) -> f64 {
    shannon_rate(params.bandwidth_hz, snr(h, f, params))
}

fn to_db(x: f64) -> f64 {
    10.0 * x.max(f64::MIN_POSITIVE).log10()
}

/// Prices one AP-DU link: distance, fiber rate and the mmWave rate after beam
/// selection. Distances under 1 m are raised to 1 m.
pub fn link_budget<R: Rng + ?Sized>(
    du: &DistributedUnit,
    ap: &AccessPoint,
    params: &MmWaveParams,
    fiber_rate: f64,
    rng: &mut R,
) -> Result<LinkBudget> {
    let raw = du.position().dist2(ap.position()).sqrt();
    let distance_m = if raw < DISTANCE_FLOOR_M {
        log::warn!(
            "AP {} is {raw:.3} m from DU {}; clamping to {DISTANCE_FLOOR_M} m",
            ap.id,
            du.id
        );
        DISTANCE_FLOOR_M
    } else {
        raw
    };
    let h = sample_channel_at(distance_m, geometric_aod(du, ap), params, rng)?;
    let f = select_beamformer(&h.entries, params.codebook());
    let snr = snr(&h.entries, &f, params);
    Ok(LinkBudget {
        du_id: du.id,
        ap_id: ap.id,
        distance_m,
        fiber_rate,
        mmwave_rate: shannon_rate(params.bandwidth_hz, snr),
        snr_db: to_db(snr),
        los: h.los,
    })
}

/// One budget per AP, ordered by AP id. AP `l` draws from channel substream
/// `l` of `seed`, so links can be computed in any order.
pub fn build_link_budgets(
    scenario: &Scenario,
    params: &MmWaveParams,
    fiber_rate: f64,
    seed: u64,
) -> Result<Vec<LinkBudget>> {
    let owner = scenario.du_of_ap();
    scenario
        .aps
        .iter()
        .map(|ap| {
            let du = scenario
                .dus
                .get(owner[ap.id])
                .ok_or(Error::UnknownDu(owner[ap.id]))?;
            let mut rng = substream(seed, Stream::Channel, ap.id as u64);
            link_budget(du, ap, params, fiber_rate, &mut rng)
        })
        .collect()
}
