use super::{ClusterSolution, PlanningProblem};
use crate::error::{Error, Result};

/// Largest cluster [`solve_cluster_bruteforce`] accepts.
pub const BRUTE_FORCE_MAX_APS: usize = 20;

/// Enumerates all `2^n` fiber/mmWave splits of one cluster.
pub fn solve_cluster_bruteforce(problem: &PlanningProblem, du_id: usize) -> Result<ClusterSolution> {
    let model = problem.cluster_model(du_id)?;
    let n = model.len();
    if n > BRUTE_FORCE_MAX_APS {
        return Err(Error::ClusterTooLarge {
            du: du_id,
            size: n,
            max: BRUTE_FORCE_MAX_APS,
        });
    }
    let mut best: Option<(Vec<bool>, f64)> = None;
    let mut u = vec![false; n];
    for code in 0u32..(1u32 << n) {
        for (i, ui) in u.iter_mut().enumerate() {
            *ui = code >> i & 1 == 1;
        }
        let (obj, ok) = model.evaluate(&u);
        if ok && best.as_ref().is_none_or(|b| obj < b.1) {
            best = Some((u.clone(), obj));
        }
    }
    Ok(match best {
        Some((u, _)) => model.solution(u, true),
        None => model.infeasible(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostParams;
    use crate::optimizer::testutil::*;
    use crate::rng::{substream, Stream};

    #[test]
    fn rejects_large_clusters() {
        let mut rng = substream(3, Stream::Heuristic, 0);
        let p = single_cluster_problem(random_cluster(&mut rng, 0, 0, 21, false), CostParams::default());
        assert!(matches!(
            solve_cluster_bruteforce(&p, 0),
            Err(Error::ClusterTooLarge { size: 21, .. })
        ));
    }

    #[test]
    fn single_ap_pays_full_du_overhead() {
        let mut rng = substream(3, Stream::Heuristic, 0);
        let mut spec = random_cluster(&mut rng, 0, 0, 1, false);
        spec.aps[0].distance_m = 100.0;
        spec.aps[0].threshold = 1e8;
        spec.aps[0].mmwave_rate = 5e9;
        let p = single_cluster_problem(spec, CostParams::default());
        let s = solve_cluster_bruteforce(&p, 0).unwrap();
        // Fiber: 11387 + 61727 = 73114; mmWave: 19000 + 34500 = 53500.
        assert_eq!(s.u, vec![false]);
        assert_eq!(s.objective, 53_500.0);
        assert!(s.v);
        assert_eq!(s.kappa, 0);
    }
}
