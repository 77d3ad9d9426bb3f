//! Stochastic monotonicity and the constructive Siegmund dual.
//!
//! On a totally ordered finite state space (the index order), a monotone
//! chain `P` has a dual with respect to `H(x, y) = 1{x >= y}`, built from the
//! tail function `G(x, y) = P_x(X_1 >= y)`: the dual row mass is
//! `Q(y, x) = G(x, y) - G(x-, y)`, and whatever mass is missing from row `y`
//! goes to an appended absorbing cemetery state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::mat::Mat;
use crate::linalg::{DualityMatrix, StochasticMatrix};
use crate::tol::TOL_ENTRY;

#[derive(Debug, Clone, Serialize)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// `(x, y, z)` with `x < y` but `P_x(X >= z) > P_y(X >= z)`.
    pub witness: Option<(usize, usize, usize)>,
}

/// Tail sums `G(x, z) = sum_{x' >= z} P(x, x')`.
fn tail_function(p: &StochasticMatrix) -> Mat {
    let n = p.n();
    let mut g = Mat::zeros(n, n);
    for x in 0..n {
        let mut acc = 0.0;
        for z in (0..n).rev() {
            acc += p.mat()[(x, z)];
            g[(x, z)] = acc;
        }
    }
    g
}

/// Exhaustive stochastic-monotonicity check over all ordered pairs and all
/// thresholds.
pub fn check_monotone(p: &StochasticMatrix) -> Result<MonotoneReport> {
    p.require_square("check_monotone")?;
    let n = p.n();
    let g = tail_function(p);
    for x in 0..n {
        for y in x + 1..n {
            for z in 0..n {
                if g[(x, z)] > g[(y, z)] + TOL_ENTRY {
                    return Ok(MonotoneReport {
                        monotone: false,
                        witness: Some((x, y, z)),
                    });
                }
            }
        }
    }
    Ok(MonotoneReport {
        monotone: true,
        witness: None,
    })
}

/// The Siegmund dual of a monotone chain, on the state space extended by an
/// absorbing cemetery (appended after the largest state).
#[derive(Debug, Clone)]
pub struct SiegmundDual {
    /// `(n+1) x (n+1)` stochastic matrix; last state is the cemetery.
    pub extended: StochasticMatrix,
    /// Defect mass routed to the cemetery, one entry per original state.
    pub defect: Vec<f64>,
    /// Worst deviation of the partial-sum identity
    /// `sum_{x' <= x} Q(y, x') = G(x, y)` over all pairs.
    pub partial_sum_residual: f64,
    /// Residual of `P H = H Q^T` with `H(x, y) = 1{x >= y}` on the original
    /// space (the cemetery column is invisible to H).
    pub duality_residual: f64,
}

impl SiegmundDual {
    /// The dual restricted to the original states (substochastic in general).
    pub fn restricted(&self) -> Mat {
        let n = self.defect.len();
        Mat::from_fn(n, n, |y, x| self.extended.mat()[(y, x)])
    }
}

/// Build the Siegmund dual of `p`. Fails with the violating triple when `p`
/// is not stochastically monotone.
pub fn siegmund_dual(p: &StochasticMatrix) -> Result<SiegmundDual> {
    let report = check_monotone(p)?;
    if let Some((x, y, z)) = report.witness {
        return Err(Error::NotMonotone { x, y, z });
    }
    let n = p.n();
    let g = tail_function(p);

    let mut ext = Mat::zeros(n + 1, n + 1);
    let mut defect = Vec::with_capacity(n);
    for y in 0..n {
        let mut row_sum = 0.0;
        for x in 0..n {
            let below = if x == 0 { 0.0 } else { g[(x - 1, y)] };
            let mass = (g[(x, y)] - below).max(0.0);
            ext[(y, x)] = mass;
            row_sum += mass;
        }
        let d = (1.0 - row_sum).max(0.0);
        ext[(y, n)] = d;
        defect.push(d);
    }
    ext[(n, n)] = 1.0; // cemetery is absorbing

    // Verify the defining partial-sum identity and the matrix duality.
    let mut partial_sum_residual = 0.0f64;
    for y in 0..n {
        let mut acc = 0.0;
        for x in 0..n {
            acc += ext[(y, x)];
            partial_sum_residual = partial_sum_residual.max((acc - g[(x, y)]).abs());
        }
    }
    let extended = StochasticMatrix::new(ext)?;
    let h = DualityMatrix::siegmund_indicator(n);
    let restricted = Mat::from_fn(n, n, |y, x| extended.mat()[(y, x)]);
    let duality_residual = p
        .mat()
        .matmul(h.mat())
        .max_abs_diff(&h.mat().matmul(&restricted.transpose()));

    Ok(SiegmundDual {
        extended,
        defect,
        partial_sum_residual,
        duality_residual,
    })
}
