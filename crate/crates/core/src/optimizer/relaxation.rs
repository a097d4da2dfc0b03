//! LP relaxation of one cluster.
//!
//! With `z = 1 - u` substituted, the variables are the fiber flags `u`, the
//! antenna flag `v`, and the OTN count `kappa`:
//!
//! ```text
//! min  sum (cF_i - cM) u_i + CmDU v + CfDU kappa + n cM
//! s.t. kappa - sum u / split >= 0
//!      kappa - sum u / split <= 1 - eps
//!      v + sum u / n >= 1            (v >= share of mmWave APs)
//!      v + sum u <= n                (v <= number of mmWave APs)
//!      sum (RF_i - RM_i) u_i >= alpha W - sum RM_i
//!      0 <= u, v <= 1,  kappa >= 0
//! ```
//!
//! Per-AP rate constraints hold for any convex mix of two arms that each meet
//! the threshold, so they enter only through the arm masks (bounds on `u`).

use super::{ClusterModel, RATE_TOL};
use crate::lp::{self, LinearProgram, LpOutcome, Relation};

/// Branching decisions for one cluster. `u` follows the cluster's AP order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixings {
    pub u: Vec<Option<bool>>,
    pub v: Option<bool>,
    pub kappa_min: u32,
    pub kappa_max: Option<u32>,
}

impl Fixings {
    pub fn free(n: usize) -> Self {
        Self {
            u: vec![None; n],
            v: None,
            kappa_min: 0,
            kappa_max: None,
        }
    }

    /// Everything fixed to a given fiber/mmWave split, with the forced OTN
    /// count and antenna flag.
    pub fn integral(u: &[bool], otn_split: u32) -> Self {
        let n_fiber = u.iter().filter(|&&b| b).count();
        let k = crate::cost::otn_count(n_fiber, otn_split);
        Self {
            u: u.iter().map(|&b| Some(b)).collect(),
            v: Some(n_fiber < u.len()),
            kappa_min: k,
            kappa_max: Some(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationSolution {
    /// Lower bound on the cluster cost under the fixings.
    pub bound: f64,
    pub u: Vec<f64>,
    pub z: Vec<f64>,
    pub v: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Relaxation {
    Feasible(RelaxationSolution),
    Infeasible,
    /// The simplex gave up; callers must not prune on this node.
    Stalled,
}

/// Solves the cluster LP under `fixings` and the model's arm masks.
pub fn lp_relaxation(model: &ClusterModel<'_>, fixings: &Fixings) -> Relaxation {
    let n = model.len();
    assert_eq!(fixings.u.len(), n, "fixings sized for a different cluster");
    let split = model.cost.otn_split as f64;
    let nf = n as f64;
    let iv = n;
    let ik = n + 1;

    let mut c = vec![0.0f64; n + 2];
    let mut lo = vec![0.0f64; n + 2];
    let mut hi = vec![1.0f64; n + 2];
    for i in 0..n {
        c[i] = model.fiber_cost[i] - model.mmwave_cost;
        let m = model.masks[i];
        if !m.mmwave {
            lo[i] = 1.0;
        }
        if !m.fiber {
            hi[i] = 0.0;
        }
        match fixings.u[i] {
            Some(true) => lo[i] = lo[i].max(1.0),
            Some(false) => hi[i] = hi[i].min(0.0),
            None => {}
        }
    }
    c[iv] = model.cost.mmw_du_cost;
    c[ik] = model.cost.fiber_du_cost;
    if let Some(b) = fixings.v {
        lo[iv] = b as u8 as f64;
        hi[iv] = lo[iv];
    }
    lo[ik] = fixings.kappa_min as f64;
    hi[ik] = fixings.kappa_max.map_or(f64::INFINITY, |k| k as f64);

    let mut lp = LinearProgram::new(c, lo, hi);
    let mut row = |u_coef: &dyn Fn(usize) -> f64, v: f64, k: f64, rel: Relation, rhs: f64| {
        let mut a: Vec<f64> = (0..n).map(u_coef).collect();
        a.push(v);
        a.push(k);
        lp.add_row(a, rel, rhs);
    };
    row(&|_| -1.0 / split, 0.0, 1.0, Relation::Ge, 0.0);
    row(&|_| -1.0 / split, 0.0, 1.0, Relation::Le, 1.0 - model.epsilon);
    row(&|_| 1.0 / nf, 1.0, 0.0, Relation::Ge, 1.0);
    row(&|_| 1.0, 1.0, 0.0, Relation::Le, nf);
    let mmw_sum: f64 = model.spec.aps.iter().map(|a| a.mmwave_rate).sum();
    let aps = &model.spec.aps;
    // Rates in Gbps keep the row comparable to the others before scaling.
    row(
        &|i| (aps[i].fiber_rate - aps[i].mmwave_rate) * 1e-9,
        0.0,
        0.0,
        Relation::Ge,
        (model.backhaul_demand() - RATE_TOL - mmw_sum) * 1e-9,
    );

    match lp::solve(&lp) {
        LpOutcome::Optimal { x, .. } => {
            let u: Vec<f64> = x[..n].iter().map(|&v| v.clamp(0.0, 1.0)).collect();
            let z: Vec<f64> = u.iter().map(|&v| 1.0 - v).collect();
            let v = x[iv].clamp(0.0, 1.0);
            let kappa = x[ik].max(0.0);
            let mut bound = 0.0;
            for i in 0..n {
                bound += u[i] * model.fiber_cost[i] + z[i] * model.mmwave_cost;
            }
            bound += v * model.cost.mmw_du_cost + kappa * model.cost.fiber_du_cost;
            Relaxation::Feasible(RelaxationSolution { bound, u, z, v, kappa })
        }
        LpOutcome::Infeasible => Relaxation::Infeasible,
        LpOutcome::Unbounded | LpOutcome::Stalled => Relaxation::Stalled,
    }
}
