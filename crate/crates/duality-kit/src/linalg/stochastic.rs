//! Stochastic and generator matrices with their invariants, the
//! uniformization matrix exponential, and stationary distributions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::eig::{eigenvalues, Eigenvalue};
use crate::linalg::mat::Mat;
use crate::tol::{TOL_ENTRY, TOL_ROW, UNIFORMIZATION_TAIL};

/// Row-stochastic matrix: entries >= 0 (after clamping round-off no worse
/// than `TOL_ENTRY`), every row summing to 1 within `TOL_ROW`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    mat: Mat,
}

/// Q-matrix: nonnegative off-diagonal rates, zero row sums within `TOL_ROW`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    mat: Mat,
}

/// Nonnegative vector summing to 1 within `TOL_ROW`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    entries: Vec<f64>,
}

/// Finite real vector, an element of the signed measures on a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedVector {
    pub entries: Vec<f64>,
}

impl SignedVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        for (i, &e) in entries.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::NonFinite { row: 0, col: i });
            }
        }
        Ok(SignedVector { entries })
    }
}

/// Outcome of `validate_stochastic`: worst row-sum deviation and smallest
/// entry seen, plus the pass verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub worst_row_deviation: f64,
    pub worst_row: usize,
    pub min_entry: f64,
    pub tol_entry: f64,
    pub tol_row: f64,
}

/// Check the stochastic-matrix invariants of a raw dense matrix.
///
/// Non-finite entries are a hard error; everything else is reported. The
/// matrix passes iff the min entry is above `-TOL_ENTRY` and every row sums
/// to 1 within `TOL_ROW`.
pub fn validate_stochastic(raw: &Mat) -> Result<ValidationReport> {
    raw.all_finite()?;
    let mut worst = 0.0f64;
    let mut worst_row = 0;
    let mut min_entry = f64::INFINITY;
    for (i, row) in raw.rows_iter().enumerate() {
        let sum: f64 = row.iter().sum();
        let dev = (sum - 1.0).abs();
        if dev > worst {
            worst = dev;
            worst_row = i;
        }
        for &e in row {
            min_entry = min_entry.min(e);
        }
    }
    if raw.n_rows() == 0 {
        min_entry = 0.0;
    }
    Ok(ValidationReport {
        passed: worst <= TOL_ROW && min_entry >= -TOL_ENTRY,
        worst_row_deviation: worst,
        worst_row,
        min_entry,
        tol_entry: TOL_ENTRY,
        tol_row: TOL_ROW,
    })
}

impl StochasticMatrix {
    /// Validate and construct; entries in `[-TOL_ENTRY, 0)` are clamped to 0.
    pub fn new(raw: Mat) -> Result<Self> {
        let report = validate_stochastic(&raw)?;
        if !report.passed {
            return Err(Error::Validation(format!(
                "row {} deviates from sum 1 by {:e}, min entry {:e}",
                report.worst_row, report.worst_row_deviation, report.min_entry
            )));
        }
        let mut mat = raw;
        for i in 0..mat.n_rows() {
            for v in mat.row_mut(i) {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        Ok(StochasticMatrix { mat })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        StochasticMatrix::new(Mat::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        StochasticMatrix {
            mat: Mat::identity(n),
        }
    }

    /// Row count. Row-stochastic matrices may be rectangular (kernels
    /// between different spaces); chain operations below require square.
    pub fn n(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    pub fn require_square(&self, context: &'static str) -> Result<()> {
        if self.mat.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension {
                context,
                expected: "square chain matrix".into(),
                got: format!("{}x{}", self.mat.n_rows(), self.mat.n_cols()),
            })
        }
    }

    pub fn eigenvalue_multiset(&self) -> Result<Vec<Eigenvalue>> {
        eigenvalues(&self.mat)
    }

    /// Left stationary vector: pi with pi P = pi, found by a direct solve of
    /// the balance equations with the normalization replacing one redundant
    /// row. Caller asserts irreducibility on the recurrent class.
    pub fn stationary_distribution(&self) -> Result<ProbabilityVector> {
        self.require_square("stationary_distribution")?;
        let n = self.n();
        let mut a = self.mat.transpose();
        for i in 0..n {
            a[(i, i)] -= 1.0;
        }
        stationary_from_balance(a, |pi| {
            let pi_p = self.mat.vecmat(pi);
            pi_p.iter()
                .zip(pi)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        })
    }
}

impl GeneratorMatrix {
    pub fn new(raw: Mat) -> Result<Self> {
        if !raw.is_square() {
            return Err(Error::Dimension {
                context: "GeneratorMatrix::new",
                expected: "square matrix".into(),
                got: format!("{}x{}", raw.n_rows(), raw.n_cols()),
            });
        }
        raw.all_finite()?;
        let n = raw.n_rows();
        for i in 0..n {
            let sum: f64 = raw.row(i).iter().sum();
            if sum.abs() > TOL_ROW {
                return Err(Error::Validation(format!(
                    "generator row {i} sums to {sum:e}, not 0"
                )));
            }
            for j in 0..n {
                if i != j && raw[(i, j)] < -TOL_ENTRY {
                    return Err(Error::Validation(format!(
                        "negative off-diagonal rate {:e} at ({i}, {j})",
                        raw[(i, j)]
                    )));
                }
            }
        }
        let mut mat = raw;
        for i in 0..n {
            for j in 0..n {
                if i != j && mat[(i, j)] < 0.0 {
                    mat[(i, j)] = 0.0;
                }
            }
        }
        Ok(GeneratorMatrix { mat })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        GeneratorMatrix::new(Mat::from_rows(rows)?)
    }

    pub fn zero(n: usize) -> Self {
        GeneratorMatrix { mat: Mat::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    /// `exp(tL)` by uniformization: with `m = max_i |L_ii|`, write
    /// `exp(tL) = e^{-mt} sum_k (mt)^k / k! * Ptilde^k` for the stochastic
    /// `Ptilde = I + L/m`, truncating once the Poisson tail mass drops below
    /// `UNIFORMIZATION_TAIL`. Nonnegativity and row sums survive by
    /// construction; a large `mt` is handled by repeated squaring of a
    /// shorter horizon.
    pub fn transition_matrix(&self, t: f64) -> Result<StochasticMatrix> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        let n = self.n();
        let lambda_star = (0..n).fold(0.0f64, |m, i| m.max(self.mat[(i, i)].abs()));
        if lambda_star == 0.0 || t == 0.0 {
            return Ok(StochasticMatrix::identity(n));
        }

        // Keep the Poisson parameter small enough for the series; square up.
        let mut halvings = 0u32;
        let mut tt = t;
        while lambda_star * tt > 256.0 {
            tt *= 0.5;
            halvings += 1;
        }

        let mut p_tilde = self.mat.scale(1.0 / lambda_star);
        for i in 0..n {
            p_tilde[(i, i)] += 1.0;
            // Rate round-off can leave hairline negatives off the diagonal.
            for j in 0..n {
                if p_tilde[(i, j)] < 0.0 {
                    p_tilde[(i, j)] = 0.0;
                }
            }
        }

        let m = lambda_star * tt;
        let mut weight = (-m).exp();
        let mut cumulative = weight;
        let mut result = Mat::identity(n).scale(weight);
        let mut power = Mat::identity(n);
        let mut k = 1.0;
        while 1.0 - cumulative > UNIFORMIZATION_TAIL {
            power = power.matmul(&p_tilde);
            weight *= m / k;
            k += 1.0;
            for i in 0..n {
                for j in 0..n {
                    result[(i, j)] += weight * power[(i, j)];
                }
            }
            cumulative += weight;
            if k > 4096.0 {
                break;
            }
        }
        for _ in 0..halvings {
            result = result.matmul(&result);
        }
        StochasticMatrix::new(result)
    }

    pub fn eigenvalue_multiset(&self) -> Result<Vec<Eigenvalue>> {
        eigenvalues(&self.mat)
    }

    /// Stationary vector of the chain: pi with pi L = 0.
    pub fn stationary_distribution(&self) -> Result<ProbabilityVector> {
        let a = self.mat.transpose();
        stationary_from_balance(a, |pi| {
            let pi_l = self.mat.vecmat(pi);
            pi_l.iter().fold(0.0f64, |m, x| m.max(x.abs()))
        })
    }
}

/// Shared tail of the stationary solves: `a` holds the transposed balance
/// operator (rows of `a` are the equations `sum_x pi(x) K(x, y) = 0`), whose
/// rows sum to zero, so one equation is redundant and is replaced by the
/// normalization.
fn stationary_from_balance(mut a: Mat, residual: impl Fn(&[f64]) -> f64) -> Result<ProbabilityVector> {
    let n = a.n_rows();
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = Mat::zeros(n, 1);
    b[(n - 1, 0)] = 1.0;
    let x = a.lu_solve(&b)?;
    let mut pi: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    for v in pi.iter_mut() {
        if *v < 0.0 && *v > -TOL_ROW {
            *v = 0.0;
        }
    }
    let sum: f64 = pi.iter().sum();
    for v in pi.iter_mut() {
        *v /= sum;
    }
    let res = residual(&pi);
    if res > TOL_ROW {
        return Err(Error::StationaryResidual {
            residual: res,
            tolerance: TOL_ROW,
        });
    }
    ProbabilityVector::new(pi)
}

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let mut sum = 0.0;
        for (i, &e) in entries.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::NonFinite { row: 0, col: i });
            }
            if e < -TOL_ENTRY {
                return Err(Error::Validation(format!(
                    "probability vector entry {i} is {e:e}"
                )));
            }
            sum += e;
        }
        if (sum - 1.0).abs() > TOL_ROW {
            return Err(Error::Validation(format!(
                "probability vector sums to {sum}, not 1"
            )));
        }
        let entries = entries.into_iter().map(|e| e.max(0.0)).collect();
        Ok(ProbabilityVector { entries })
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector {
            entries: vec![1.0 / n as f64; n],
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}
