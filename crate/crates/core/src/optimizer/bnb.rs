//! Best-bound branch-and-bound per cluster.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::relaxation::{lp_relaxation, Fixings, Relaxation, RelaxationSolution};
use super::{ClusterModel, ClusterSolution, Plan, PlanningProblem};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BnbStats {
    pub nodes: usize,
    pub lp_solves: usize,
    pub stalls: usize,
}

struct Node {
    bound: f64,
    depth: usize,
    id: usize,
    fixings: Fixings,
    relax: Option<RelaxationSolution>,
}

// Max-heap order: lowest bound first, then deeper, then older.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

fn prune_tol(incumbent: f64) -> f64 {
    1e-10 * incumbent.abs().max(1.0)
}

fn frac(x: f64) -> f64 {
    (x - x.round()).abs()
}

struct Search<'m, 'a> {
    model: &'m ClusterModel<'a>,
    best: Option<(Vec<bool>, f64)>,
    stats: BnbStats,
}

impl Search<'_, '_> {
    fn incumbent(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.1)
    }

    fn offer(&mut self, u: Vec<bool>) {
        let (obj, ok) = self.model.evaluate(&u);
        if ok && obj < self.incumbent() {
            self.best = Some((u, obj));
        }
    }

    fn relax(&mut self, f: &Fixings) -> Relaxation {
        self.stats.lp_solves += 1;
        let r = lp_relaxation(self.model, f);
        if r == Relaxation::Stalled {
            self.stats.stalls += 1;
            log::warn!("LP stalled in cluster {}; evaluating node without a bound", self.model.spec.du_id);
        }
        r
    }

    /// Resolves a node whose relaxation could not be solved: enumerate if
    /// every `u` is fixed, otherwise branch blindly.
    fn fixed_u(&self, f: &Fixings) -> Option<Vec<bool>> {
        f.u.iter()
            .zip(&self.model.masks)
            .map(|(fx, m)| match (fx, m.fiber, m.mmwave) {
                (Some(b), _, _) => Some(*b),
                (None, true, false) => Some(true),
                (None, false, true) => Some(false),
                _ => None,
            })
            .collect()
    }
}

fn children(model: &ClusterModel<'_>, f: &Fixings, relax: Option<&RelaxationSolution>) -> Option<[Fixings; 2]> {
    let free = |i: usize| f.u[i].is_none() && model.masks[i].fiber && model.masks[i].mmwave;
    let branch_u = |i: usize| {
        let mut a = f.clone();
        let mut b = f.clone();
        a.u[i] = Some(false);
        b.u[i] = Some(true);
        [a, b]
    };
    match relax {
        Some(r) => {
            let mut pick: Option<(usize, f64)> = None;
            for i in (0..r.u.len()).filter(|&i| free(i)) {
                let d = frac(r.u[i]);
                if d > model.integrality_tol && pick.is_none_or(|(_, best)| d > best) {
                    pick = Some((i, d));
                }
            }
            if let Some((i, _)) = pick {
                return Some(branch_u(i));
            }
            if frac(r.kappa) > model.integrality_tol {
                let mut a = f.clone();
                let mut b = f.clone();
                a.kappa_max = Some(r.kappa.floor() as u32);
                b.kappa_min = r.kappa.ceil() as u32;
                return Some([a, b]);
            }
            if frac(r.v) > model.integrality_tol && f.v.is_none() {
                let mut a = f.clone();
                let mut b = f.clone();
                a.v = Some(false);
                b.v = Some(true);
                return Some([a, b]);
            }
            None
        }
        None => (0..f.u.len()).find(|&i| free(i)).map(branch_u),
    }
}

/// Solves one cluster to optimality.
pub fn solve_cluster_bnb(model: &ClusterModel<'_>) -> (ClusterSolution, BnbStats) {
    let n = model.len();
    let mut s = Search {
        model,
        best: None,
        stats: BnbStats::default(),
    };
    if model.masks.iter().any(|m| !m.fiber && !m.mmwave) {
        return (model.infeasible(), s.stats);
    }

    let root_fix = Fixings::free(n);
    let root = match s.relax(&root_fix) {
        Relaxation::Infeasible => return (model.infeasible(), s.stats),
        Relaxation::Feasible(r) => Some(r),
        Relaxation::Stalled => None,
    };

    // Starting incumbents: fiber wherever allowed, and the rounded root LP.
    s.offer(model.masks.iter().map(|m| m.fiber).collect());
    if let Some(r) = &root {
        s.offer(
            r.u.iter()
                .zip(&model.masks)
                .map(|(&x, m)| if !m.mmwave { true } else if !m.fiber { false } else { x >= 0.5 })
                .collect(),
        );
    }

    let mut heap = BinaryHeap::new();
    let mut next_id = 0;
    heap.push(Node {
        bound: root.as_ref().map_or(f64::NEG_INFINITY, |r| r.bound),
        depth: 0,
        id: next_id,
        fixings: root_fix,
        relax: root,
    });
    next_id += 1;

    while let Some(node) = heap.pop() {
        s.stats.nodes += 1;
        let inc = s.incumbent();
        if node.bound >= inc - prune_tol(inc) {
            continue;
        }
        let Some(kids) = children(model, &node.fixings, node.relax.as_ref()) else {
            match &node.relax {
                // Integral relaxation: u, kappa and v all at forced values.
                Some(r) => s.offer(r.u.iter().map(|&x| x > 0.5).collect()),
                None => {
                    if let Some(u) = s.fixed_u(&node.fixings) {
                        s.offer(u);
                    }
                }
            }
            continue;
        };
        for f in kids {
            let relax = match s.relax(&f) {
                Relaxation::Infeasible => continue,
                Relaxation::Feasible(r) => Some(r),
                Relaxation::Stalled => None,
            };
            let bound = relax.as_ref().map_or(f64::NEG_INFINITY, |r| r.bound);
            let inc = s.incumbent();
            if bound >= inc - prune_tol(inc) {
                continue;
            }
            heap.push(Node {
                bound,
                depth: node.depth + 1,
                id: next_id,
                fixings: f,
                relax,
            });
            next_id += 1;
        }
    }

    let sol = match s.best.take() {
        Some((u, _)) => model.solution(u, true),
        None => model.infeasible(),
    };
    (sol, s.stats)
}

/// Solves every cluster and assembles the plan.
pub fn solve_bnb(problem: &PlanningProblem) -> Plan {
    let arms = problem.prune_infeasible_arms();
    let solutions: Vec<ClusterSolution> = (0..problem.num_dus())
        .map(|w| {
            let model = problem.cluster_model(w).expect("cluster index in range");
            let (sol, stats) = solve_cluster_bnb(&model);
            log::debug!(
                "cluster {w}: {} APs, {} nodes, {} LPs, objective {}",
                model.len(),
                stats.nodes,
                stats.lp_solves,
                sol.objective
            );
            sol
        })
        .collect();
    problem.assemble(&solutions, arms.infeasible_aps)
}
