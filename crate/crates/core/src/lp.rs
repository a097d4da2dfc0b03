//! Dense bounded-variable primal simplex.
//!
//! Solves `min c^T x` subject to linear rows `a^T x {<=, =, >=} b` and
//! per-variable bounds `lo <= x <= hi` with finite `lo` and possibly infinite
//! `hi`. Bounds are handled implicitly: a nonbasic variable sits at one of its
//! bounds and may flip to the other without a pivot. Phase one minimizes the
//! sum of artificials; pricing is Dantzig's rule with a switch to Bland's rule
//! after a run of degenerate steps.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(objective.len(), lower.len());
        assert_eq!(objective.len(), upper.len());
        Self {
            objective,
            lower,
            upper,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
    /// The pivot limit was hit; should not happen with Bland's fallback.
    Stalled,
}

const PIVOT_TOL: f64 = 1e-9;
const BLAND_AFTER: usize = 50;

struct Tableau {
    m: usize,
    ncols: usize,
    /// Row-major `B^-1 A`, `m x ncols`.
    t: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    basic: Vec<usize>,
    is_basic: Vec<bool>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.ncols + j]
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let n = self.ncols;
        let p = self.t[r * n + j];
        for k in 0..n {
            self.t[r * n + k] /= p;
        }
        self.t[r * n + j] = 1.0;
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * n + j];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                self.t[i * n + k] -= f * self.t[r * n + k];
            }
            self.t[i * n + j] = 0.0;
        }
        self.is_basic[self.basic[r]] = false;
        self.basic[r] = j;
        self.is_basic[j] = true;
    }

    /// Runs simplex iterations for `cost`. Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[f64], opt_tol: f64, max_iters: usize) -> Option<bool> {
        let mut degenerate = 0usize;
        for _ in 0..max_iters {
            let bland = degenerate >= BLAND_AFTER;
            // Pricing.
            let mut enter: Option<(usize, f64)> = None;
            for j in 0..self.ncols {
                if self.is_basic[j] || self.hi[j] - self.lo[j] <= 0.0 {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..self.m {
                    let a = self.at(i, j);
                    if a != 0.0 {
                        d -= cost[self.basic[i]] * a;
                    }
                }
                let at_lower = self.x[j] <= self.lo[j];
                let improving = if at_lower { d < -opt_tol } else { d > opt_tol };
                if !improving {
                    continue;
                }
                if bland {
                    enter = Some((j, d));
                    break;
                }
                if enter.is_none_or(|(_, best)| d.abs() > best.abs()) {
                    enter = Some((j, d));
                }
            }
            let Some((j, d)) = enter else {
                return Some(true);
            };
            let dir = if d < 0.0 { 1.0 } else { -1.0 };

            // Ratio test.
            let mut step = self.hi[j] - self.lo[j];
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let alpha = dir * self.at(i, j);
                let b = self.basic[i];
                let limit = if alpha > PIVOT_TOL {
                    (self.x[b] - self.lo[b]).max(0.0) / alpha
                } else if alpha < -PIVOT_TOL && self.hi[b].is_finite() {
                    (self.hi[b] - self.x[b]).max(0.0) / -alpha
                } else {
                    continue;
                };
                let better = match leave {
                    None => limit < step,
                    Some((r, _)) => {
                        limit < step
                            || (limit == step
                                && if bland {
                                    b < self.basic[r]
                                } else {
                                    alpha.abs() > (dir * self.at(r, j)).abs()
                                })
                    }
                };
                if better {
                    step = limit;
                    leave = Some((i, alpha));
                }
            }
            if step.is_infinite() {
                return Some(false);
            }
            if step <= PIVOT_TOL {
                degenerate += 1;
            } else {
                degenerate = 0;
            }

            self.x[j] += dir * step;
            for i in 0..self.m {
                let a = self.at(i, j);
                if a != 0.0 {
                    let b = self.basic[i];
                    self.x[b] -= dir * step * a;
                }
            }
            match leave {
                None => {
                    // Bound flip.
                    self.x[j] = if dir > 0.0 { self.hi[j] } else { self.lo[j] };
                }
                Some((r, alpha)) => {
                    let b = self.basic[r];
                    self.x[b] = if alpha > 0.0 { self.lo[b] } else { self.hi[b] };
                    self.pivot(r, j);
                }
            }
        }
        None
    }
}

/// Solves `lp` to optimality.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let m = lp.rows.len();
    for j in 0..n {
        assert!(lp.lower[j].is_finite(), "lower bounds must be finite");
        if lp.lower[j] > lp.upper[j] {
            return LpOutcome::Infeasible;
        }
    }

    // Scale each row to unit max-coefficient.
    let rows: Vec<Row> = lp
        .rows
        .iter()
        .map(|r| {
            let s = r.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            if s > 0.0 {
                Row {
                    coeffs: r.coeffs.iter().map(|c| c / s).collect(),
                    relation: r.relation,
                    rhs: r.rhs / s,
                }
            } else {
                r.clone()
            }
        })
        .collect();

    // Column layout: structurals, one slack per inequality, artificials.
    let n_slack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let x0: Vec<f64> = lp.lower.clone();
    let residual: Vec<f64> = rows
        .iter()
        .map(|r| r.rhs - r.coeffs.iter().zip(&x0).map(|(a, x)| a * x).sum::<f64>())
        .collect();
    let needs_art: Vec<bool> = rows
        .iter()
        .zip(&residual)
        .map(|(r, &res)| match r.relation {
            Relation::Le => res < 0.0,
            Relation::Ge => res > 0.0,
            Relation::Eq => true,
        })
        .collect();
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let ncols = n + n_slack + n_art;

    let mut t = vec![0.0; m * ncols];
    let mut lo = vec![0.0; ncols];
    let mut hi = vec![f64::INFINITY; ncols];
    let mut x = vec![0.0; ncols];
    lo[..n].copy_from_slice(&lp.lower);
    hi[..n].copy_from_slice(&lp.upper);
    x[..n].copy_from_slice(&x0);
    let mut basic = vec![0; m];
    let mut is_basic = vec![false; ncols];

    let mut slack = n;
    let mut art = n + n_slack;
    for (i, row) in rows.iter().enumerate() {
        let res = residual[i];
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        let slack_col = match row.relation {
            Relation::Le => Some((slack, 1.0)),
            Relation::Ge => Some((slack, -1.0)),
            Relation::Eq => None,
        };
        if let Some(s) = slack_col {
            coeffs.push(s);
            slack += 1;
        }
        let (basis_col, basis_coef) = if needs_art[i] {
            let c = (art, if res >= 0.0 { 1.0 } else { -1.0 });
            coeffs.push(c);
            art += 1;
            c
        } else {
            slack_col.expect("inequality row")
        };
        for (j, &a) in row.coeffs.iter().enumerate() {
            t[i * ncols + j] = a / basis_coef;
        }
        for &(j, a) in &coeffs {
            t[i * ncols + j] = a / basis_coef;
        }
        basic[i] = basis_col;
        is_basic[basis_col] = true;
        x[basis_col] = res / basis_coef;
    }

    let mut tab = Tableau {
        m,
        ncols,
        t,
        lo,
        hi,
        x,
        basic,
        is_basic,
    };
    let max_iters = 50 * (m + ncols) + 1000;

    if n_art > 0 {
        let mut cost1 = vec![0.0; ncols];
        for c in cost1.iter_mut().skip(n + n_slack) {
            *c = 1.0;
        }
        if tab.optimize(&cost1, 1e-12, max_iters).is_none() {
            return LpOutcome::Stalled;
        }
        let infeas: f64 = tab.x[n + n_slack..].iter().sum();
        let scale = 1.0 + rows.iter().fold(0.0f64, |a, r| a.max(r.rhs.abs()));
        if infeas > 1e-9 * scale {
            return LpOutcome::Infeasible;
        }
        for j in n + n_slack..ncols {
            tab.hi[j] = 0.0;
            if !tab.is_basic[j] {
                tab.x[j] = 0.0;
            }
        }
    }

    let mut cost2 = vec![0.0; ncols];
    cost2[..n].copy_from_slice(&lp.objective);
    let cmax = lp.objective.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    match tab.optimize(&cost2, 1e-9 * cmax.max(1e-12), max_iters) {
        None => LpOutcome::Stalled,
        Some(false) => LpOutcome::Unbounded,
        Some(true) => {
            let x: Vec<f64> = (0..n)
                .map(|j| tab.x[j].clamp(lp.lower[j], lp.upper[j]))
                .collect();
            let objective = x.iter().zip(&lp.objective).map(|(a, c)| a * c).sum();
            LpOutcome::Optimal { x, objective }
        }
    }
}
