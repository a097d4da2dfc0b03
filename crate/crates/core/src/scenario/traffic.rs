//! Gaussian-hotspot traffic field.
//!
//! The raw field is the average of unit-mass isotropic Gaussians, one per
//! hotspot. It is mapped affinely so that its largest value on a sampling grid
//! becomes `x_max_rate` and its smallest becomes `x_min_rate`. Off-grid points
//! are clamped into that range.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SigmaMode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hotspot {
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
}

impl Hotspot {
    fn density(&self, x: f64, y: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let r2 = (x - self.x).powi(2) + (y - self.y).powi(2);
        (-r2 / (2.0 * s2)).exp() / (2.0 * PI * s2)
    }
}

/// Normalized traffic density at `(x, y)`, in 1/m^2.
pub fn eval_traffic_norm(hotspots: &[Hotspot], x: f64, y: f64) -> Result<f64> {
    if hotspots.is_empty() {
        return Err(Error::NoHotspots);
    }
    let sum: f64 = hotspots.iter().map(|h| h.density(x, y)).sum();
    Ok(sum / hotspots.len() as f64)
}

/// Draws hotspot centers uniformly over the region.
pub fn sample_hotspots<R: Rng + ?Sized>(
    count: usize,
    region_side: f64,
    sigma_mode: SigmaMode,
    sigma_range: [f64; 2],
    rng: &mut R,
) -> Vec<Hotspot> {
    let draw_sigma = |rng: &mut R| {
        if sigma_range[0] == sigma_range[1] {
            sigma_range[0]
        } else {
            rng.random_range(sigma_range[0]..=sigma_range[1])
        }
    };
    let common = draw_sigma(rng);
    (0..count)
        .map(|_| {
            let x = rng.random_range(0.0..=region_side);
            let y = rng.random_range(0.0..=region_side);
            let sigma = match sigma_mode {
                SigmaMode::Common => common,
                SigmaMode::PerHotspot => draw_sigma(rng),
            };
            Hotspot { x, y, sigma }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficField {
    pub hotspots: Vec<Hotspot>,
    pub x_min_rate: f64,
    pub x_max_rate: f64,
    pub region_side: f64,
    pub grid: usize,
    /// Extremes of the normalized density over the sampling grid.
    pub norm_min: f64,
    pub norm_max: f64,
    pub grid_argmin: [f64; 2],
    pub grid_argmax: [f64; 2],
}

impl TrafficField {
    /// Builds the field and locates its extrema on a `grid` x `grid` lattice
    /// spanning `[0, region_side]^2`, boundaries included.
    pub fn new(
        hotspots: Vec<Hotspot>,
        x_min_rate: f64,
        x_max_rate: f64,
        region_side: f64,
        grid: usize,
    ) -> Result<Self> {
        if hotspots.is_empty() {
            return Err(Error::NoHotspots);
        }
        let grid = grid.max(2);
        let step = region_side / (grid - 1) as f64;
        let mut norm_min = f64::INFINITY;
        let mut norm_max = f64::NEG_INFINITY;
        let mut grid_argmin = [0.0; 2];
        let mut grid_argmax = [0.0; 2];
        for i in 0..grid {
            let x = i as f64 * step;
            for j in 0..grid {
                let y = j as f64 * step;
                let v = eval_traffic_norm(&hotspots, x, y)?;
                if v > norm_max {
                    norm_max = v;
                    grid_argmax = [x, y];
                }
                if v < norm_min {
                    norm_min = v;
                    grid_argmin = [x, y];
                }
            }
        }
        Ok(Self {
            hotspots,
            x_min_rate,
            x_max_rate,
            region_side,
            grid,
            norm_min,
            norm_max,
            grid_argmin,
            grid_argmax,
        })
    }

    pub fn eval_norm(&self, x: f64, y: f64) -> f64 {
        let sum: f64 = self.hotspots.iter().map(|h| h.density(x, y)).sum();
        sum / self.hotspots.len() as f64
    }

    /// Traffic demand at `(x, y)` in bits/s.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let span = self.norm_max - self.norm_min;
        if !(span > 0.0) {
            return self.x_min_rate;
        }
        let t = (self.eval_norm(x, y) - self.norm_min) / span;
        let v = self.x_min_rate + (self.x_max_rate - self.x_min_rate) * t;
        v.clamp(self.x_min_rate, self.x_max_rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn one(x: f64, y: f64, sigma: f64) -> Hotspot {
        Hotspot { x, y, sigma }
    }

    #[test]
    fn peak_density_at_center() {
        let v = eval_traffic_norm(&[one(500.0, 500.0, 100.0)], 500.0, 500.0).unwrap();
        assert_relative_eq!(v, 1.0 / (2.0 * PI * 100.0 * 100.0), max_relative = 1e-15);
        assert_relative_eq!(v, 1.5915e-5, max_relative = 1e-4);
    }

    #[test]
    fn one_sigma_ratio() {
        let h = [one(500.0, 500.0, 100.0)];
        let c = eval_traffic_norm(&h, 500.0, 500.0).unwrap();
        let v = eval_traffic_norm(&h, 600.0, 500.0).unwrap();
        assert_relative_eq!(v / c, (-0.5f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn two_hotspots_average() {
        let a = one(100.0, 200.0, 150.0);
        let b = one(900.0, 300.0, 300.0);
        let (x, y) = (400.0, 250.0);
        let g = |h: &Hotspot| {
            let s2 = h.sigma * h.sigma;
            let r2 = (x - h.x).powi(2) + (y - h.y).powi(2);
            1.0 / (2.0 * PI * s2) * (-r2 / (2.0 * s2)).exp()
        };
        let expected = 0.5 * (g(&a) + g(&b));
        let v = eval_traffic_norm(&[a, b], x, y).unwrap();
        assert_relative_eq!(v, expected, max_relative = 1e-14);
    }

    #[test]
    fn empty_field_rejected() {
        assert!(matches!(eval_traffic_norm(&[], 0.0, 0.0), Err(Error::NoHotspots)));
        assert!(TrafficField::new(vec![], 1.0, 2.0, 10.0, 5).is_err());
    }

    #[test]
    fn grid_extrema_map_to_rate_bounds() {
        let f = TrafficField::new(
            vec![one(700.0, 1300.0, 200.0), one(1500.0, 400.0, 350.0)],
            0.1e9,
            10e9,
            2000.0,
            200,
        )
        .unwrap();
        assert_eq!(f.eval(f.grid_argmax[0], f.grid_argmax[1]), 10e9);
        assert_eq!(f.eval(f.grid_argmin[0], f.grid_argmin[1]), 0.1e9);
        // Exhaustive sweep on a finer grid than the calibration grid.
        for i in 0..=300 {
            for j in 0..=300 {
                let v = f.eval(i as f64 * 2000.0 / 300.0, j as f64 * 2000.0 / 300.0);
                assert!((0.1e9..=10e9).contains(&v));
            }
        }
    }

    #[test]
    fn common_sigma_shared() {
        let mut rng = crate::rng::substream(5, crate::rng::Stream::Hotspots, 0);
        let hs = sample_hotspots(4, 2000.0, SigmaMode::Common, [150.0, 400.0], &mut rng);
        assert!(hs.iter().all(|h| h.sigma == hs[0].sigma));
        let hs = sample_hotspots(4, 2000.0, SigmaMode::PerHotspot, [150.0, 400.0], &mut rng);
        assert!(hs.iter().any(|h| h.sigma != hs[0].sigma));
        assert!(hs.iter().all(|h| (150.0..=400.0).contains(&h.sigma)));
    }
}
