//! Lloyd's K-means with greedy farthest-point initialization.

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: Vec<Point>,
    /// Cluster index per input point.
    pub assignment: Vec<usize>,
    /// Within-cluster sum of squared distances after every assignment step.
    pub sse_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Index of the centroid nearest to `p`; ties go to the lowest index.
fn nearest(p: Point, centroids: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = p.dist2(centroids[0]);
    for (j, &c) in centroids.iter().enumerate().skip(1) {
        let d = p.dist2(c);
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

fn farthest_point_init<R: Rng + ?Sized>(points: &[Point], k: usize, rng: &mut R) -> Vec<Point> {
    let first = rng.random_range(0..points.len());
    let mut centroids = vec![points[first]];
    let mut min_d: Vec<f64> = points.iter().map(|p| p.dist2(points[first])).collect();
    while centroids.len() < k {
        let mut pick = 0;
        for (i, &d) in min_d.iter().enumerate() {
            if d > min_d[pick] {
                pick = i;
            }
        }
        let c = points[pick];
        centroids.push(c);
        for (d, p) in min_d.iter_mut().zip(points) {
            *d = d.min(p.dist2(c));
        }
    }
    centroids
}

/// Assigns every point to its nearest centroid, then re-seeds each empty
/// cluster at the point farthest from its own centroid (taken from a cluster
/// that keeps at least one member).
fn assign(points: &[Point], centroids: &mut [Point], assignment: &mut [usize]) {
    let k = centroids.len();
    let mut sizes = vec![0usize; k];
    for (a, &p) in assignment.iter_mut().zip(points) {
        *a = nearest(p, centroids);
        sizes[*a] += 1;
    }
    for j in 0..k {
        if sizes[j] > 0 {
            continue;
        }
        let mut pick: Option<(usize, f64)> = None;
        for (i, &p) in points.iter().enumerate() {
            let owner = assignment[i];
            if sizes[owner] <= 1 {
                continue;
            }
            let d = p.dist2(centroids[owner]);
            if pick.is_none_or(|(_, best)| d > best) {
                pick = Some((i, d));
            }
        }
        // k <= n guarantees some cluster holds two or more points.
        let (i, _) = pick.expect("a cluster with spare points exists when k <= n");
        sizes[assignment[i]] -= 1;
        assignment[i] = j;
        sizes[j] = 1;
        centroids[j] = points[i];
    }
}

fn sse(points: &[Point], centroids: &[Point], assignment: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(&p, &a)| p.dist2(centroids[a]))
        .sum()
}

/// Clusters `points` into `k` groups. Requires `1 <= k <= points.len()`.
pub fn kmeans<R: Rng + ?Sized>(
    points: &[Point],
    k: usize,
    rng: &mut R,
    max_iters: usize,
    tol: f64,
) -> KMeansResult {
    assert!(k >= 1 && k <= points.len(), "need 1 <= k <= n");
    let mut centroids = farthest_point_init(points, k, rng);
    let mut assignment = vec![0; points.len()];
    let mut sse_history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        assign(points, &mut centroids, &mut assignment);
        sse_history.push(sse(points, &centroids, &assignment));
        iterations += 1;

        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (&p, &a) in points.iter().zip(&assignment) {
            sums[a].0 += p.x;
            sums[a].1 += p.y;
            sums[a].2 += 1;
        }
        let mut shift: f64 = 0.0;
        for (c, &(sx, sy, n)) in centroids.iter_mut().zip(&sums) {
            let next = Point::new(sx / n as f64, sy / n as f64);
            shift = shift.max(c.dist2(next).sqrt());
            *c = next;
        }
        if shift < tol {
            converged = true;
            break;
        }
    }
    assign(points, &mut centroids, &mut assignment);
    sse_history.push(sse(points, &centroids, &assignment));

    KMeansResult {
        centroids,
        assignment,
        sse_history,
        iterations,
        converged,
    }
}
