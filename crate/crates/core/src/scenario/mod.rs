//! Network realizations.
//!
//! A [`Scenario`] is one draw of the deployment: uniformly placed APs, DUs at
//! K-means centroids with their AP clusters, a hotspot traffic field that sets
//! each AP's capacity threshold, and a backhaul rate per DU.

pub mod kmeans;
pub mod traffic;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::rng::{substream, Stream};

pub use kmeans::{kmeans, KMeansResult, Point};
pub use traffic::{eval_traffic_norm, sample_hotspots, Hotspot, TrafficField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessPoint {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Fronthaul capacity threshold in bits/s; zero until assigned.
    pub threshold: f64,
}

impl AccessPoint {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributedUnit {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Ids of the associated APs, ascending.
    pub cluster: Vec<usize>,
    /// Backhaul rate in bits/s; zero until generated.
    pub backhaul_rate: f64,
}

impl DistributedUnit {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub region_side: f64,
    pub aps: Vec<AccessPoint>,
    pub dus: Vec<DistributedUnit>,
    pub field: TrafficField,
}

pub fn place_aps<R: Rng + ?Sized>(count: usize, region_side: f64, rng: &mut R) -> Vec<AccessPoint> {
    (0..count)
        .map(|id| AccessPoint {
            id,
            x: rng.random_range(0.0..=region_side),
            y: rng.random_range(0.0..=region_side),
            threshold: 0.0,
        })
        .collect()
}

/// Places DUs at K-means centroids of the AP positions and associates each AP
/// with its nearest DU.
pub fn place_dus_kmeans<R: Rng + ?Sized>(
    aps: &[AccessPoint],
    du_count: usize,
    rng: &mut R,
    max_iters: usize,
    tol: f64,
) -> Result<Vec<DistributedUnit>> {
    if du_count == 0 || du_count > aps.len() {
        return Err(Error::TooManyDus {
            requested: du_count,
            available: aps.len(),
        });
    }
    let points: Vec<Point> = aps.iter().map(AccessPoint::position).collect();
    let km = kmeans(&points, du_count, rng, max_iters, tol);
    let mut dus: Vec<DistributedUnit> = km
        .centroids
        .iter()
        .enumerate()
        .map(|(id, c)| DistributedUnit {
            id,
            x: c.x,
            y: c.y,
            cluster: Vec::new(),
            backhaul_rate: 0.0,
        })
        .collect();
    for (ap, &label) in aps.iter().zip(&km.assignment) {
        dus[label].cluster.push(ap.id);
    }
    Ok(dus)
}

pub fn assign_thresholds(aps: &mut [AccessPoint], field: &TrafficField) {
    for ap in aps {
        ap.threshold = field.eval(ap.x, ap.y);
    }
}

/// Sets `backhaul_rate = (beta / alpha) * sum of cluster thresholds`, with
/// `beta` uniform on `beta_range`. With `beta <= 1` the required fronthaul
/// share `alpha * backhaul_rate` never exceeds the cluster's total demand.
pub fn generate_backhaul_rates<R: Rng + ?Sized>(
    dus: &mut [DistributedUnit],
    aps: &[AccessPoint],
    alpha: f64,
    beta_range: [f64; 2],
    rng: &mut R,
) -> Result<()> {
    for du in dus {
        if du.cluster.is_empty() {
            return Err(Error::EmptyCluster { du: du.id });
        }
        let demand: f64 = du.cluster.iter().map(|&l| aps[l].threshold).sum();
        let beta = if beta_range[0] == beta_range[1] {
            beta_range[0]
        } else {
            rng.random_range(beta_range[0]..=beta_range[1])
        };
        du.backhaul_rate = beta / alpha * demand;
    }
    Ok(())
}

impl Scenario {
    /// Generates one realization. Every stage draws from its own substream of
    /// `seed`, so the result depends only on `(cfg, alpha, seed)`.
    pub fn generate(cfg: &ScenarioConfig, alpha: f64, seed: u64) -> Result<Self> {
        let mut aps = place_aps(
            cfg.num_aps,
            cfg.region_side_m,
            &mut substream(seed, Stream::AccessPoints, 0),
        );
        let hotspots = sample_hotspots(
            cfg.hotspots,
            cfg.region_side_m,
            cfg.sigma_mode,
            cfg.sigma_range_m,
            &mut substream(seed, Stream::Hotspots, 0),
        );
        let field = TrafficField::new(
            hotspots,
            cfg.x_min_bps,
            cfg.x_max_bps,
            cfg.region_side_m,
            cfg.grid_resolution,
        )?;
        let mut dus = place_dus_kmeans(
            &aps,
            cfg.num_dus,
            &mut substream(seed, Stream::KMeans, 0),
            cfg.kmeans_max_iters,
            cfg.kmeans_tol_m,
        )?;
        assign_thresholds(&mut aps, &field);
        generate_backhaul_rates(
            &mut dus,
            &aps,
            alpha,
            cfg.beta_range,
            &mut substream(seed, Stream::Backhaul, 0),
        )?;
        Ok(Self {
            seed,
            region_side: cfg.region_side_m,
            aps,
            dus,
            field,
        })
    }

    /// DU id per AP.
    pub fn du_of_ap(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.aps.len()];
        for du in &self.dus {
            for &l in &du.cluster {
                owner[l] = du.id;
            }
        }
        owner
    }

    /// Checks ids, cluster partition and value ranges of a loaded scenario.
    pub fn validate(&self) -> Result<()> {
        for (i, ap) in self.aps.iter().enumerate() {
            if ap.id != i {
                return Err(Error::Dimension(format!("AP at position {i} has id {}", ap.id)));
            }
        }
        let mut seen = vec![false; self.aps.len()];
        for (w, du) in self.dus.iter().enumerate() {
            if du.id != w {
                return Err(Error::Dimension(format!("DU at position {w} has id {}", du.id)));
            }
            if du.cluster.is_empty() {
                return Err(Error::EmptyCluster { du: w });
            }
            for &l in &du.cluster {
                if l >= seen.len() || seen[l] {
                    return Err(Error::Dimension(format!(
                        "DU {w} lists AP {l} which is unknown or already clustered"
                    )));
                }
                seen[l] = true;
            }
        }
        if let Some(l) = seen.iter().position(|s| !s) {
            return Err(Error::Dimension(format!("AP {l} belongs to no cluster")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ScenarioConfig {
        ScenarioConfig {
            num_aps: 60,
            num_dus: 4,
            grid_resolution: 60,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn place_aps_within_region() {
        let mut rng = substream(11, Stream::AccessPoints, 0);
        let aps = place_aps(1, 2000.0, &mut rng);
        assert_eq!(aps.len(), 1);
        assert!((0.0..=2000.0).contains(&aps[0].x) && (0.0..=2000.0).contains(&aps[0].y));
        let aps = place_aps(200, 2000.0, &mut rng);
        assert_eq!(aps.len(), 200);
        assert!(aps.iter().enumerate().all(|(i, a)| a.id == i));
    }

    #[test]
    fn place_aps_deterministic() {
        let a = place_aps(50, 2000.0, &mut substream(42, Stream::AccessPoints, 0));
        let b = place_aps(50, 2000.0, &mut substream(42, Stream::AccessPoints, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn too_many_dus_rejected() {
        let aps = place_aps(3, 100.0, &mut substream(1, Stream::AccessPoints, 0));
        let err = place_dus_kmeans(&aps, 4, &mut substream(1, Stream::KMeans, 0), 100, 1e-6);
        assert!(matches!(err, Err(Error::TooManyDus { requested: 4, available: 3 })));
    }

    #[test]
    fn backhaul_formula() {
        let aps: Vec<AccessPoint> = (0..2)
            .map(|id| AccessPoint { id, x: 0.0, y: 0.0, threshold: 10e9 })
            .collect();
        let mut dus = vec![DistributedUnit {
            id: 0,
            x: 0.0,
            y: 0.0,
            cluster: vec![0, 1],
            backhaul_rate: 0.0,
        }];
        let mut rng = substream(1, Stream::Backhaul, 0);
        generate_backhaul_rates(&mut dus, &aps, 0.7, [1.0, 1.0], &mut rng).unwrap();
        approx::assert_relative_eq!(dus[0].backhaul_rate, 20e9 / 0.7, max_relative = 1e-15);
        approx::assert_relative_eq!(0.7 * dus[0].backhaul_rate, 20e9, max_relative = 1e-15);

        generate_backhaul_rates(&mut dus, &aps, 0.7, [0.8, 0.8], &mut rng).unwrap();
        approx::assert_relative_eq!(0.7 * dus[0].backhaul_rate, 0.8 * 20e9, max_relative = 1e-15);

        generate_backhaul_rates(&mut dus, &aps, 1.0, [1.0, 1.0], &mut rng).unwrap();
        assert_eq!(dus[0].backhaul_rate, 20e9);

        dus[0].cluster.clear();
        assert!(matches!(
            generate_backhaul_rates(&mut dus, &aps, 0.7, [1.0, 1.0], &mut rng),
            Err(Error::EmptyCluster { du: 0 })
        ));
    }

    #[test]
    fn generated_scenario_invariants() {
        let cfg = small_cfg();
        let s = Scenario::generate(&cfg, 0.7, 99).unwrap();
        s.validate().unwrap();
        assert_eq!(s.aps.len(), 60);
        assert_eq!(s.dus.len(), 4);
        assert_eq!(s.dus.iter().map(|d| d.cluster.len()).sum::<usize>(), 60);
        for ap in &s.aps {
            assert!((cfg.x_min_bps..=cfg.x_max_bps).contains(&ap.threshold));
        }
        for du in &s.dus {
            let demand: f64 = du.cluster.iter().map(|&l| s.aps[l].threshold).sum();
            assert!(0.7 * du.backhaul_rate <= demand * (1.0 + 1e-12));
            assert!(0.7 * du.backhaul_rate <= du.cluster.len() as f64 * 10e9);
        }
        // Each AP is with its nearest DU.
        for du in &s.dus {
            for &l in &du.cluster {
                let p = s.aps[l].position();
                for other in &s.dus {
                    assert!(p.dist2(du.position()) <= p.dist2(other.position()));
                }
            }
        }
    }

    #[test]
    fn generation_is_bit_reproducible() {
        let cfg = small_cfg();
        let a = serde_json::to_string(&Scenario::generate(&cfg, 0.7, 5).unwrap()).unwrap();
        let b = serde_json::to_string(&Scenario::generate(&cfg, 0.7, 5).unwrap()).unwrap();
        let c = serde_json::to_string(&Scenario::generate(&cfg, 0.7, 6).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn thresholds_are_pointwise() {
        let s = Scenario::generate(&small_cfg(), 0.7, 21).unwrap();
        let mut aps = s.aps.clone();
        aps.reverse();
        assign_thresholds(&mut aps, &s.field);
        for ap in &aps {
            assert_eq!(ap.threshold, s.aps[ap.id].threshold);
        }
        let mut at_peak = vec![AccessPoint {
            id: 0,
            x: s.field.grid_argmax[0],
            y: s.field.grid_argmax[1],
            threshold: 0.0,
        }];
        assign_thresholds(&mut at_peak, &s.field);
        assert_eq!(at_peak[0].threshold, 10e9);
    }

    #[test]
    fn far_from_hotspots_is_near_floor() {
        let field = TrafficField::new(
            vec![Hotspot { x: 100.0, y: 100.0, sigma: 150.0 }],
            0.1e9,
            10e9,
            2000.0,
            100,
        )
        .unwrap();
        let mut aps = vec![AccessPoint { id: 0, x: 1900.0, y: 1900.0, threshold: 0.0 }];
        assign_thresholds(&mut aps, &field);
        approx::assert_relative_eq!(aps[0].threshold, 0.1e9, max_relative = 1e-9);
    }
}
