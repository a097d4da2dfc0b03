//! Cost-minimizing technology selection.
//!
//! Each AP picks fiber or mmWave; each DU buys `ceil(fiber APs / otn_split)`
//! OTNs and one antenna array if any of its APs uses mmWave. Every AP must get
//! at least its threshold rate, and each DU's APs together must carry
//! `alpha` times the DU's backhaul rate.
//!
//! No constraint couples two clusters, so the problem splits into one small
//! mixed-integer program per DU. Each is solved exactly by branch-and-bound
//! over an LP relaxation ([`solve_cluster_bnb`]); [`solve_cluster_bruteforce`]
//! enumerates assignments and serves as a reference for small clusters.

mod bnb;
mod bruteforce;
mod feasibility;
mod relaxation;

use serde::{Deserialize, Serialize};

use crate::channel::LinkBudget;
use crate::cost::{self, ApTerm, CostBreakdown, CostParams, DuTerm};
use crate::error::{Error, Result};
use crate::scenario::Scenario;

pub use bnb::{solve_bnb, solve_cluster_bnb, BnbStats};
pub use bruteforce::{solve_cluster_bruteforce, BRUTE_FORCE_MAX_APS};
pub use feasibility::{check_feasibility, ConstraintKind, FeasibilityReport, Violation};
pub use relaxation::{lp_relaxation, Fixings, Relaxation, RelaxationSolution};

/// Absolute slack, in bits/s, allowed on rate constraints.
pub const RATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technology {
    Fiber,
    Mmwave,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApLink {
    pub ap_id: usize,
    pub distance_m: f64,
    pub threshold: f64,
    pub fiber_rate: f64,
    pub mmwave_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub du_id: usize,
    pub backhaul_rate: f64,
    pub aps: Vec<ApLink>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanningProblem {
    pub num_aps: usize,
    pub clusters: Vec<ClusterSpec>,
    pub cost: CostParams,
    pub alpha: f64,
    pub epsilon: f64,
    /// Distance from an integer below which an LP value counts as integral.
    pub integrality_tol: f64,
}

/// Which technologies can meet an AP's threshold on their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmMask {
    pub fiber: bool,
    pub mmwave: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArmReport {
    /// Indexed by AP id.
    pub masks: Vec<ArmMask>,
    /// APs with no technology meeting their threshold.
    pub infeasible_aps: Vec<usize>,
}

impl ArmReport {
    pub fn is_feasible(&self) -> bool {
        self.infeasible_aps.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    /// Proven cost-minimal.
    Optimal,
    /// Satisfies every constraint, optimality not claimed.
    Feasible,
    Infeasible,
}

/// A full assignment. `u`/`z` are indexed by AP id, `v`/`kappa` by DU id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub u: Vec<bool>,
    pub z: Vec<bool>,
    pub v: Vec<bool>,
    pub kappa: Vec<u32>,
    pub objective: f64,
    pub status: PlanStatus,
    pub infeasible_aps: Vec<usize>,
    pub infeasible_dus: Vec<usize>,
}

impl Plan {
    pub fn technology(&self, ap: usize) -> Option<Technology> {
        match (self.u[ap], self.z[ap]) {
            (true, false) => Some(Technology::Fiber),
            (false, true) => Some(Technology::Mmwave),
            _ => None,
        }
    }

    pub fn fiber_count(&self) -> usize {
        self.u.iter().filter(|&&b| b).count()
    }

    pub fn mmwave_count(&self) -> usize {
        self.z.iter().filter(|&&b| b).count()
    }
}

/// A solved cluster. `u` follows the order of the cluster's AP list.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSolution {
    pub du_id: usize,
    pub ap_ids: Vec<usize>,
    pub u: Vec<bool>,
    pub v: bool,
    pub kappa: u32,
    pub objective: f64,
    pub feasible: bool,
}

/// Rate delivered to an AP under flags `(u, z)`.
pub(crate) fn selected_rate(link: &ApLink, u: bool, z: bool) -> f64 {
    let mut r = 0.0;
    if u {
        r += link.fiber_rate;
    }
    if z {
        r += link.mmwave_rate;
    }
    r
}

/// One DU's data in the form the cluster solvers use.
#[derive(Debug, Clone)]
pub struct ClusterModel<'a> {
    pub spec: &'a ClusterSpec,
    pub cost: &'a CostParams,
    pub alpha: f64,
    pub epsilon: f64,
    pub integrality_tol: f64,
    pub masks: Vec<ArmMask>,
    pub fiber_cost: Vec<f64>,
    pub mmwave_cost: f64,
}

impl ClusterModel<'_> {
    pub fn len(&self) -> usize {
        self.spec.aps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spec.aps.is_empty()
    }

    pub fn backhaul_demand(&self) -> f64 {
        self.alpha * self.spec.backhaul_rate
    }

    /// Cost and feasibility of a fiber/mmWave split, with the OTN count and
    /// antenna flag set by their forcing rules.
    pub fn evaluate(&self, u: &[bool]) -> (f64, bool) {
        let n_fiber = u.iter().filter(|&&b| b).count();
        let kappa = cost::otn_count(n_fiber, self.cost.otn_split);
        let antenna = n_fiber < u.len();
        let mut total = 0.0;
        let mut rate_sum = 0.0;
        let mut feasible = true;
        for (i, (&ui, link)) in u.iter().zip(&self.spec.aps).enumerate() {
            total += if ui { self.fiber_cost[i] } else { self.mmwave_cost };
            let r = selected_rate(link, ui, !ui);
            rate_sum += r;
            if r < link.threshold - RATE_TOL {
                feasible = false;
            }
        }
        total += kappa as f64 * self.cost.fiber_du_cost;
        if antenna {
            total += self.cost.mmw_du_cost;
        }
        if rate_sum < self.backhaul_demand() - RATE_TOL {
            feasible = false;
        }
        (total, feasible)
    }

    fn solution(&self, u: Vec<bool>, feasible: bool) -> ClusterSolution {
        let (objective, _) = self.evaluate(&u);
        let n_fiber = u.iter().filter(|&&b| b).count();
        ClusterSolution {
            du_id: self.spec.du_id,
            ap_ids: self.spec.aps.iter().map(|a| a.ap_id).collect(),
            kappa: cost::otn_count(n_fiber, self.cost.otn_split),
            v: n_fiber < u.len(),
            u,
            objective,
            feasible,
        }
    }

    fn infeasible(&self) -> ClusterSolution {
        ClusterSolution {
            du_id: self.spec.du_id,
            ap_ids: self.spec.aps.iter().map(|a| a.ap_id).collect(),
            u: vec![false; self.len()],
            v: false,
            kappa: 0,
            objective: f64::INFINITY,
            feasible: false,
        }
    }
}

impl PlanningProblem {
    pub fn new(
        num_aps: usize,
        clusters: Vec<ClusterSpec>,
        cost: CostParams,
        alpha: f64,
        epsilon: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Dimension(format!("alpha {alpha} outside (0, 1]")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0 / cost.otn_split as f64) {
            return Err(Error::Dimension(format!(
                "epsilon {epsilon} outside (0, 1/{})",
                cost.otn_split
            )));
        }
        let mut seen = vec![false; num_aps];
        for (w, c) in clusters.iter().enumerate() {
            if c.du_id != w {
                return Err(Error::Dimension(format!("cluster {w} has DU id {}", c.du_id)));
            }
            if c.aps.is_empty() {
                return Err(Error::EmptyCluster { du: w });
            }
            for a in &c.aps {
                if a.ap_id >= num_aps || seen[a.ap_id] {
                    return Err(Error::Dimension(format!(
                        "AP {} is out of range or in two clusters",
                        a.ap_id
                    )));
                }
                seen[a.ap_id] = true;
            }
        }
        if let Some(l) = seen.iter().position(|s| !s) {
            return Err(Error::Dimension(format!("AP {l} belongs to no cluster")));
        }
        Ok(Self {
            num_aps,
            clusters,
            cost,
            alpha,
            epsilon,
            integrality_tol: 1e-9,
        })
    }

    pub fn with_integrality_tol(mut self, tol: f64) -> Self {
        self.integrality_tol = tol;
        self
    }

    pub fn num_dus(&self) -> usize {
        self.clusters.len()
    }

    /// Per-AP binaries (fiber and mmWave flags).
    pub fn num_binaries(&self) -> usize {
        2 * self.num_aps
    }

    /// Per-DU variables (antenna flag and OTN count).
    pub fn num_du_vars(&self) -> usize {
        2 * self.num_dus()
    }

    /// Masks off every technology whose rate falls short of the AP's
    /// threshold.
    pub fn prune_infeasible_arms(&self) -> ArmReport {
        let mut masks = vec![ArmMask { fiber: true, mmwave: true }; self.num_aps];
        let mut infeasible_aps = Vec::new();
        for c in &self.clusters {
            for a in &c.aps {
                let m = ArmMask {
                    fiber: a.fiber_rate >= a.threshold - RATE_TOL,
                    mmwave: a.mmwave_rate >= a.threshold - RATE_TOL,
                };
                if !m.fiber && !m.mmwave {
                    infeasible_aps.push(a.ap_id);
                }
                masks[a.ap_id] = m;
            }
        }
        infeasible_aps.sort_unstable();
        ArmReport {
            masks,
            infeasible_aps,
        }
    }

    pub fn cluster_model(&self, du_id: usize) -> Result<ClusterModel<'_>> {
        let spec = self.clusters.get(du_id).ok_or(Error::UnknownDu(du_id))?;
        let masks = spec
            .aps
            .iter()
            .map(|a| ArmMask {
                fiber: a.fiber_rate >= a.threshold - RATE_TOL,
                mmwave: a.mmwave_rate >= a.threshold - RATE_TOL,
            })
            .collect();
        Ok(ClusterModel {
            spec,
            cost: &self.cost,
            alpha: self.alpha,
            epsilon: self.epsilon,
            integrality_tol: self.integrality_tol,
            masks,
            fiber_cost: spec
                .aps
                .iter()
                .map(|a| cost::fiber_ap_cost(a.distance_m, &self.cost))
                .collect(),
            mmwave_cost: cost::mmwave_ap_cost(&self.cost),
        })
    }

    /// Distance to the serving DU, by AP id.
    pub fn distances(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.num_aps];
        for c in &self.clusters {
            for a in &c.aps {
                d[a.ap_id] = a.distance_m;
            }
        }
        d
    }

    /// AP thresholds, by AP id.
    pub fn thresholds(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.num_aps];
        for c in &self.clusters {
            for a in &c.aps {
                t[a.ap_id] = a.threshold;
            }
        }
        t
    }

    pub fn evaluate(&self, plan: &Plan) -> Result<CostBreakdown> {
        self.check_dims(plan)?;
        let d = self.distances();
        let aps = (0..self.num_aps).map(|l| ApTerm {
            fiber: plan.u[l],
            mmwave: plan.z[l],
            distance_m: d[l],
        });
        let dus = plan
            .v
            .iter()
            .zip(&plan.kappa)
            .map(|(&antenna, &otns)| DuTerm { antenna, otns });
        Ok(cost::cost_breakdown(&self.cost, aps, dus))
    }

    pub(crate) fn check_dims(&self, plan: &Plan) -> Result<()> {
        if plan.u.len() != self.num_aps
            || plan.z.len() != self.num_aps
            || plan.v.len() != self.num_dus()
            || plan.kappa.len() != self.num_dus()
        {
            return Err(Error::Dimension(format!(
                "plan shaped for {} APs / {} DUs, problem has {} / {}",
                plan.u.len(),
                plan.v.len(),
                self.num_aps,
                self.num_dus()
            )));
        }
        Ok(())
    }

    /// Assembles per-cluster solutions into a plan and prices it.
    pub fn assemble(&self, solutions: &[ClusterSolution], infeasible_aps: Vec<usize>) -> Plan {
        let w = self.num_dus();
        let mut plan = Plan {
            u: vec![false; self.num_aps],
            z: vec![false; self.num_aps],
            v: vec![false; w],
            kappa: vec![0; w],
            objective: 0.0,
            status: PlanStatus::Optimal,
            infeasible_aps,
            infeasible_dus: Vec::new(),
        };
        for s in solutions {
            if !s.feasible {
                plan.infeasible_dus.push(s.du_id);
                continue;
            }
            for (&ap, &ui) in s.ap_ids.iter().zip(&s.u) {
                plan.u[ap] = ui;
                plan.z[ap] = !ui;
            }
            plan.v[s.du_id] = s.v;
            plan.kappa[s.du_id] = s.kappa;
        }
        if !plan.infeasible_dus.is_empty() || !plan.infeasible_aps.is_empty() {
            plan.status = PlanStatus::Infeasible;
        }
        plan.objective = self
            .evaluate(&plan)
            .expect("assembled plan matches problem")
            .objective;
        plan
    }
}

/// Builds the planning problem from a scenario and its link budgets.
pub fn build_problem(
    scenario: &Scenario,
    links: &[LinkBudget],
    cost: &CostParams,
    alpha: f64,
    epsilon: f64,
) -> Result<PlanningProblem> {
    let l = scenario.aps.len();
    if links.len() != l {
        return Err(Error::Dimension(format!("{} link budgets for {l} APs", links.len())));
    }
    let mut by_ap: Vec<Option<&LinkBudget>> = vec![None; l];
    for link in links {
        match by_ap.get_mut(link.ap_id) {
            Some(slot @ None) => *slot = Some(link),
            _ => {
                return Err(Error::Dimension(format!(
                    "link for AP {} is duplicated or out of range",
                    link.ap_id
                )))
            }
        }
    }
    let mut clusters = Vec::with_capacity(scenario.dus.len());
    for du in &scenario.dus {
        if du.cluster.is_empty() {
            return Err(Error::EmptyCluster { du: du.id });
        }
        let mut aps = Vec::with_capacity(du.cluster.len());
        for &ap in &du.cluster {
            let link = by_ap
                .get(ap)
                .copied()
                .flatten()
                .ok_or_else(|| Error::Dimension(format!("no link budget for AP {ap}")))?;
            if link.du_id != du.id {
                return Err(Error::Dimension(format!(
                    "link for AP {ap} points at DU {} but the AP is clustered with DU {}",
                    link.du_id, du.id
                )));
            }
            aps.push(ApLink {
                ap_id: ap,
                distance_m: link.distance_m,
                threshold: scenario.aps[ap].threshold,
                fiber_rate: link.fiber_rate,
                mmwave_rate: link.mmwave_rate,
            });
        }
        clusters.push(ClusterSpec {
            du_id: du.id,
            backhaul_rate: du.backhaul_rate,
            aps,
        });
    }
    PlanningProblem::new(l, clusters, cost.clone(), alpha, epsilon)
}
