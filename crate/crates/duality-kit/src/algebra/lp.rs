//! Dense two-phase simplex for small feasibility problems: does a
//! probability-like vector `x >= 0` with `A x = b` exist?
//!
//! Phase 1 minimizes the sum of artificial variables with Bland's rule
//! (lowest-index entering and leaving), which cannot cycle; with a zero
//! objective the second phase is vacuous, so feasibility is decided by the
//! phase-1 optimum alone. Infeasibility is declared when that optimum stays
//! above `TOL_LP`. Problems here have at most a few hundred variables.

use crate::linalg::mat::Mat;
use crate::tol::TOL_LP;

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// A feasible point when one exists (free variables at zero).
    pub point: Option<Vec<f64>>,
    /// The phase-1 optimum: total infeasibility left in the system.
    pub phase1_objective: f64,
}

/// Decide feasibility of `{ x >= 0 : a x = b }`.
pub fn feasible_nonnegative(a: &Mat, b: &[f64]) -> FeasibilityResult {
    let m = a.n_rows();
    let n = a.n_cols();
    assert_eq!(m, b.len());

    // Tableau with columns [structural | artificial | rhs]; rhs made >= 0.
    let cols = n + m + 1;
    let mut t = vec![0.0f64; (m + 1) * cols];
    let idx = |i: usize, j: usize| i * cols + j;
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[idx(i, j)] = flip * a[(i, j)];
        }
        t[idx(i, n + i)] = 1.0;
        t[idx(i, cols - 1)] = flip * b[i];
    }
    // Objective row: reduced costs for min(sum of artificials) with the
    // artificial basis; structural column j starts at -(column sum).
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..m {
            s += t[idx(i, j)];
        }
        t[idx(m, j)] = -s;
    }
    let mut objective: f64 = (0..m).map(|i| t[idx(i, cols - 1)]).sum();
    let mut basis: Vec<usize> = (n..n + m).collect();

    let pivot_tol = 1e-11;
    loop {
        // Bland: entering = lowest-index column with negative reduced cost.
        let mut entering = None;
        for j in 0..n + m {
            if t[idx(m, j)] < -TOL_LP * 0.1 {
                entering = Some(j);
                break;
            }
        }
        let Some(e) = entering else { break };

        // Ratio test; ties resolved toward the lowest basis variable index.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aie = t[idx(i, e)];
            if aie > pivot_tol {
                let ratio = t[idx(i, cols - 1)] / aie;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-15
                            || ((ratio - lr).abs() <= 1e-15 && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            // Unbounded phase-1 cannot happen (objective bounded below by 0);
            // a numerically empty column would stall instead, so stop.
            break;
        };

        // Pivot on (l, e).
        let p = t[idx(l, e)];
        for j in 0..cols {
            t[idx(l, j)] /= p;
        }
        for i in 0..=m {
            if i == l {
                continue;
            }
            let f = t[idx(i, e)];
            if f == 0.0 {
                continue;
            }
            for j in 0..cols {
                t[idx(i, j)] -= f * t[idx(l, j)];
            }
            t[idx(i, e)] = 0.0;
        }
        basis[l] = e;
        objective = (0..m)
            .map(|i| {
                if basis[i] >= n {
                    t[idx(i, cols - 1)]
                } else {
                    0.0
                }
            })
            .sum();
        if objective <= 0.0 {
            break;
        }
    }

    let feasible = objective.abs() <= TOL_LP;
    let point = if feasible {
        let mut x = vec![0.0; n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[idx(i, cols - 1)].max(0.0);
            }
        }
        Some(x)
    } else {
        None
    };
    FeasibilityResult {
        feasible,
        point,
        phase1_objective: objective.max(0.0),
    }
}

/// Feasibility of `{ nu >= 0 : h nu = target, sum(nu) = 1 }` — is the target
/// a convex combination of the columns of `h`?
pub fn in_convex_hull_of_columns(h: &Mat, target: &[f64]) -> FeasibilityResult {
    let m = h.n_rows();
    assert_eq!(m, target.len());
    let n = h.n_cols();
    let mut a = Mat::zeros(m + 1, n);
    for i in 0..m {
        for j in 0..n {
            a[(i, j)] = h[(i, j)];
        }
    }
    for j in 0..n {
        a[(m, j)] = 1.0;
    }
    let mut b = target.to_vec();
    b.push(1.0);
    feasible_nonnegative(&a, &b)
}
