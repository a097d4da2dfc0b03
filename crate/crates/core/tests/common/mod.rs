#![allow(dead_code)]

use fronthaul::cost::CostParams;
use fronthaul::optimizer::{ApLink, ClusterSpec, PlanningProblem};
use rand::Rng;

pub const ALPHA: f64 = 0.7;
pub const EPSILON: f64 = 1e-6;

/// Random APs with 10 Gbps fiber, mmWave rates between 0.5 and 15 Gbps and
/// thresholds that sometimes exceed one or both rates.
pub fn random_aps<R: Rng>(rng: &mut R, first_id: usize, n: usize) -> Vec<ApLink> {
    (0..n)
        .map(|i| ApLink {
            ap_id: first_id + i,
            distance_m: rng.random_range(1.0..1500.0),
            threshold: match rng.random_range(0..10) {
                0..=6 => rng.random_range(0.1e9..3e9),
                7..=8 => rng.random_range(3e9..10e9),
                _ => rng.random_range(0.1e9..10.5e9),
            },
            fiber_rate: 10e9,
            mmwave_rate: rng.random_range(0.5e9..15e9),
        })
        .collect()
}

/// Backhaul rate that is slack, binding or unattainable at random.
pub fn random_backhaul<R: Rng>(rng: &mut R, aps: &[ApLink]) -> f64 {
    let best: f64 = aps.iter().map(|a| a.fiber_rate.max(a.mmwave_rate)).sum();
    let demand: f64 = aps.iter().map(|a| a.threshold).sum();
    match rng.random_range(0..4) {
        0 => rng.random_range(0.8..1.0) / ALPHA * demand,
        1 | 2 => rng.random_range(0.4..1.0) * best / ALPHA,
        _ => rng.random_range(0.9..1.1) * best / ALPHA,
    }
}

pub fn random_problem<R: Rng>(rng: &mut R, sizes: &[usize]) -> PlanningProblem {
    let mut next = 0;
    let clusters = sizes
        .iter()
        .enumerate()
        .map(|(w, &n)| {
            let aps = random_aps(rng, next, n);
            next += n;
            ClusterSpec {
                du_id: w,
                backhaul_rate: random_backhaul(rng, &aps),
                aps,
            }
        })
        .collect();
    PlanningProblem::new(next, clusters, CostParams::default(), ALPHA, EPSILON).unwrap()
}

/// Prices and checks a joint assignment (`fiber[ap_id]`) straight from the
/// model with the default cost table written out, sharing no code with the
/// library's evaluator.
pub fn joint_cost(problem: &PlanningProblem, fiber: &[bool]) -> Option<f64> {
    let mut total = 0.0;
    for c in &problem.clusters {
        let mut n_fiber = 0u32;
        let mut n_mmw = 0u32;
        let mut rate = 0.0;
        for a in &c.aps {
            let r = if fiber[a.ap_id] {
                n_fiber += 1;
                total += 6502.0 + 2285.0 + 26.0 * a.distance_m;
                a.fiber_rate
            } else {
                n_mmw += 1;
                total += 6000.0 + 13000.0;
                a.mmwave_rate
            };
            if r < a.threshold - 1e-9 {
                return None;
            }
            rate += r;
        }
        if rate < ALPHA * c.backhaul_rate - 1e-9 {
            return None;
        }
        total += n_fiber.div_ceil(16) as f64 * 61727.0;
        if n_mmw > 0 {
            total += 34500.0;
        }
    }
    Some(total)
}

/// Minimum of [`joint_cost`] over all `2^L` assignments.
pub fn joint_bruteforce(problem: &PlanningProblem) -> Option<f64> {
    let l = problem.num_aps;
    assert!(l <= 20);
    let mut fiber = vec![false; l];
    let mut best: Option<f64> = None;
    for code in 0u32..(1 << l) {
        for (i, f) in fiber.iter_mut().enumerate() {
            *f = code >> i & 1 == 1;
        }
        if let Some(c) = joint_cost(problem, &fiber) {
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    best
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
