//! Diagonal duality functions and duality with respect to a measure.
//!
//! A diagonal `H` and a (not necessarily normalized) measure `mu` convert
//! into each other through `mu(x) = 1/|H(x, x)|` on the support; duality with
//! respect to `mu` is the pairwise identity `mu(x) P(x, y) = mu(y) Q(y, x)`,
//! which also covers substochastic (killed) kernels. The complement of the
//! support must be a trap for both chains. The resolvent kernel
//! `r_lambda = (lambda I - L)^{-1} diag(1/mu)` is itself a duality function
//! for a weakly mu-dual pair.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::mat::Mat;
use crate::linalg::{DualityMatrix, GeneratorMatrix};
use crate::tol::{TOL_REVERSIBLE, TOL_SEMIGROUP};

#[derive(Debug, Clone)]
pub struct MeasureDualityData {
    /// Nonnegative measure, zero off the support.
    pub measure: Vec<f64>,
    pub support: Vec<usize>,
    /// Diagonal duality matrix with `H(x, x) = 1/mu(x)` on the support.
    pub h: DualityMatrix,
}

/// Extract the measure `mu(x) = 1/|H(x, x)|` from a diagonal duality matrix.
pub fn measure_from_diagonal(h: &DualityMatrix) -> Result<MeasureDualityData> {
    if let Err((row, col)) = h.is_diagonal() {
        return Err(Error::NotDiagonal { row, col });
    }
    let n = h.n_rows();
    let mut measure = vec![0.0; n];
    let mut support = Vec::new();
    for x in 0..n {
        let d = h.mat()[(x, x)];
        if d != 0.0 {
            measure[x] = 1.0 / d.abs();
            support.push(x);
        }
    }
    Ok(MeasureDualityData {
        measure,
        support,
        h: h.clone(),
    })
}

/// Diagonal duality matrix from a measure: `H(x, x) = 1/mu(x)` on the
/// support of `mu`, zero elsewhere. Mutually inverse with
/// `measure_from_diagonal` on the support.
pub fn diagonal_from_measure(mu: &[f64]) -> DualityMatrix {
    let diag: Vec<f64> = mu
        .iter()
        .map(|&m| if m > 0.0 { 1.0 / m } else { 0.0 })
        .collect();
    DualityMatrix::diagonal(&diag)
}

/// Max-norm residual of `mu(x) P(x, y) = mu(y) Q(y, x)` over all pairs.
/// Raw matrices so that substochastic kernels are allowed.
pub fn check_measure_duality(p: &Mat, q: &Mat, mu: &[f64]) -> Result<f64> {
    let n = mu.len();
    if p.n_rows() != n || p.n_cols() != n || q.n_rows() != n || q.n_cols() != n {
        return Err(Error::Dimension {
            context: "check_measure_duality",
            expected: format!("{n}x{n} kernels"),
            got: format!(
                "{}x{} and {}x{}",
                p.n_rows(),
                p.n_cols(),
                q.n_rows(),
                q.n_cols()
            ),
        });
    }
    let mut worst = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            worst = worst.max((mu[x] * p[(x, y)] - mu[y] * q[(y, x)]).abs());
        }
    }
    Ok(worst)
}

/// Is `trap` a trap for `p`: no row inside the set places mass outside it?
pub fn check_trap(p: &Mat, trap: &[usize]) -> bool {
    let n = p.n_rows();
    let mut inside = vec![false; n];
    for &t in trap {
        inside[t] = true;
    }
    for &x in trap {
        for y in 0..n {
            if !inside[y] && p[(x, y)] != 0.0 {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolventReport {
    pub lambda: f64,
    pub t: f64,
    /// Residual of the generator-level weak measure duality (precondition).
    pub weak_duality_residual: f64,
    /// Residual of `exp(t L^X) r_lambda = r_lambda exp(t L^Y)^T`.
    pub residual: f64,
    pub pass: bool,
}

/// Verify that the resolvent kernel is a duality function for a weakly
/// mu-dual generator pair: builds `r_lambda(x, y) = R_lambda(x, y)/mu(y)`
/// with `R_lambda = (lambda I - L^X)^{-1}` and checks the semi-group duality
/// at horizon `t`.
pub fn resolvent_duality_check(
    lx: &GeneratorMatrix,
    ly: &GeneratorMatrix,
    mu: &[f64],
    lambda: f64,
    t: f64,
) -> Result<ResolventReport> {
    let n = lx.n();
    if ly.n() != n || mu.len() != n {
        return Err(Error::Dimension {
            context: "resolvent_duality_check",
            expected: format!("matching size {n}"),
            got: format!("{} and mu of {}", ly.n(), mu.len()),
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::Validation(format!("lambda must be > 0, got {lambda}")));
    }
    if mu.iter().any(|&m| m <= 0.0) {
        return Err(Error::Validation(
            "mu must be strictly positive for the resolvent kernel".into(),
        ));
    }
    // Weak mu-duality of the generators comes first.
    let weak = check_measure_duality(lx.mat(), ly.mat(), mu)?;
    if weak > TOL_REVERSIBLE {
        return Err(Error::NotMeasureDual(weak));
    }

    let mut a = lx.mat().scale(-1.0);
    for i in 0..n {
        a[(i, i)] += lambda;
    }
    let resolvent = a.inverse()?; // (lambda I - L)^{-1}
    let mut r_lambda = resolvent;
    for i in 0..n {
        for j in 0..n {
            r_lambda[(i, j)] /= mu[j];
        }
    }

    let px = lx.transition_matrix(t)?;
    let qy = ly.transition_matrix(t)?;
    let residual = px
        .mat()
        .matmul(&r_lambda)
        .max_abs_diff(&r_lambda.matmul(&qy.mat().transpose()));
    Ok(ResolventReport {
        lambda,
        t,
        weak_duality_residual: weak,
        residual,
        pass: residual <= TOL_SEMIGROUP,
    })
}
