//! Dense two-phase simplex for the Chebyshev-center problem
//!
//! ```text
//! maximize r  subject to  n_i·c + r ≤ b_i
//! ```
//!
//! solved through its dual `min b·y, Σ y_i n_i = 0, Σ y_i = 1, y ≥ 0`, which
//! has only `D + 1` rows. The primal optimum is read off the simplex
//! multipliers of the final tableau.

const TOL: f64 = 1e-12;
const BLAND_AFTER: usize = 50;

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows × (cols + 1)`, last column is the right-hand side.
    a: Vec<f64>,
    basis: Vec<usize>,
    reduced: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.at(pr, pc);
        for c in 0..w {
            self.a[pr * w + c] /= p;
        }
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f != 0.0 {
                for c in 0..w {
                    self.a[r * w + c] -= f * self.a[pr * w + c];
                }
            }
        }
        let f = self.reduced[pc];
        if f != 0.0 {
            for c in 0..w {
                self.reduced[c] -= f * self.a[pr * w + c];
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs simplex iterations over the columns in `0..enter_limit`.
    /// Returns false if the iteration cap is hit.
    fn optimize(&mut self, enter_limit: usize) -> bool {
        let cap = 50 * (self.cols + self.rows) + 1000;
        let mut degenerate = 0usize;
        for _ in 0..cap {
            let entering = if degenerate > BLAND_AFTER {
                (0..enter_limit).find(|&j| self.reduced[j] < -TOL)
            } else {
                (0..enter_limit)
                    .filter(|&j| self.reduced[j] < -TOL)
                    .min_by(|&a, &b| self.reduced[a].total_cmp(&self.reduced[b]))
            };
            let Some(pc) = entering else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let coef = self.at(r, pc);
                if coef > TOL {
                    let ratio = self.rhs(r) / coef;
                    let better = match best {
                        None => true,
                        Some((br, bv)) => {
                            ratio < bv - TOL || (ratio <= bv + TOL && self.basis[r] < self.basis[br])
                        }
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            // Unbounded dual means infeasible primal; cannot happen for a
            // closed polytope but guard anyway.
            let Some((pr, ratio)) = best else {
                return false;
            };
            degenerate = if ratio.abs() <= TOL { degenerate + 1 } else { 0 };
            self.pivot(pr, pc);
        }
        false
    }
}

/// Returns `(center, radius)` of the largest ball inside the intersection of
/// the halfspaces `normals[i]·x ≤ offsets[i]`, where normals are unit vectors
/// with `dim` components stored row-major.
pub(crate) fn chebyshev_center(normals: &[f64], offsets: &[f64], dim: usize) -> Option<(Vec<f64>, f64)> {
    let m = offsets.len();
    let rows = dim + 1;
    let cols = m + rows;
    let w = cols + 1;
    let mut a = vec![0.0; rows * w];
    for i in 0..m {
        for k in 0..dim {
            a[k * w + i] = normals[i * dim + k];
        }
        a[dim * w + i] = 1.0;
    }
    for k in 0..rows {
        a[k * w + m + k] = 1.0;
    }
    a[dim * w + cols] = 1.0;

    // Phase 1: minimise the sum of artificials.
    let mut reduced = vec![0.0; w];
    for c in 0..w {
        let col_sum: f64 = (0..rows).map(|r| a[r * w + c]).sum();
        let cost = if c >= m && c < cols { 1.0 } else { 0.0 };
        reduced[c] = cost - col_sum;
    }
    let mut t = Tableau {
        rows,
        cols,
        a,
        basis: (m..cols).collect(),
        reduced,
    };
    if !t.optimize(m) {
        return None;
    }
    if -t.reduced[cols] > 1e-9 {
        return None;
    }
    // Drive remaining zero-level artificials out of the basis where possible.
    for r in 0..rows {
        if t.basis[r] >= m {
            if let Some(c) = (0..m).find(|&c| t.at(r, c).abs() > 1e-9) {
                t.pivot(r, c);
            }
        }
    }

    // Phase 2: costs are the offsets; artificials never re-enter.
    let cost = |c: usize| if c < m { offsets[c] } else { 0.0 };
    for c in 0..w {
        let z: f64 = (0..rows).map(|r| cost(t.basis[r]) * t.at(r, c)).sum();
        t.reduced[c] = if c < cols { cost(c) - z } else { -z };
    }
    if !t.optimize(m) {
        return None;
    }
    // Reduced cost of artificial column k is -π_k.
    let pi: Vec<f64> = (0..rows).map(|k| -t.reduced[m + k]).collect();
    let center = pi[..dim].to_vec();
    let radius = pi[dim];
    Some((center, radius))
}
