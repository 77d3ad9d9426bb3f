//! Duality checking and solving on finite state spaces.
//!
//! A pair of chains `P` on `E` and `Q` on `F` is dual with respect to the
//! matrix `H` iff `P H = H Q^T`; the generator form reads `L H = H Lhat^T`.
//! This module decides the discrete duality equation, solves for duals
//! (signed solutions by elimination, stochastic ones by LP feasibility per
//! column), tests invariance of the convex hull of the columns of `H`,
//! compares spectra of dual pairs, and runs the reversible intertwining
//! check.

pub mod lp;
pub mod measure;
pub mod sep;
pub mod siegmund;
pub mod tensor;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::eig::{eigenvalues, Eigenvalue};
use crate::linalg::mat::Mat;
use crate::linalg::{DualityMatrix, GeneratorMatrix, ProbabilityVector, StochasticMatrix};
use crate::tol::{Tolerances, TOL_DUALITY, TOL_PIVOT, TOL_REVERSIBLE, TOL_SEMIGROUP, TOL_SPECTRAL};

pub use measure::{
    check_measure_duality, check_trap, diagonal_from_measure, measure_from_diagonal,
    resolvent_duality_check, MeasureDualityData, ResolventReport,
};
pub use sep::{sep_instance, sep_symmetry_check, SepInstance, SepReport};
pub use siegmund::{check_monotone, siegmund_dual, MonotoneReport, SiegmundDual};
pub use tensor::{build_tensor_duality, nondegeneracy_check, NondegeneracyReport, TensorKind};

fn check_dims(rows: usize, cols: usize, h: &DualityMatrix, context: &'static str) -> Result<()> {
    if h.n_rows() != rows || h.n_cols() != cols {
        return Err(Error::Dimension {
            context,
            expected: format!("H of size {rows}x{cols}"),
            got: format!("{}x{}", h.n_rows(), h.n_cols()),
        });
    }
    Ok(())
}

/// Max-norm residual of the discrete duality equation `P H = H Q^T`.
/// Duality holds iff the result is at or below the duality tolerance.
pub fn check_duality_discrete(
    p: &StochasticMatrix,
    q: &StochasticMatrix,
    h: &DualityMatrix,
) -> Result<f64> {
    p.require_square("check_duality_discrete")?;
    q.require_square("check_duality_discrete")?;
    check_dims(p.n(), q.n(), h, "check_duality_discrete")?;
    let lhs = p.mat().matmul(h.mat());
    let rhs = h.mat().matmul(&q.mat().transpose());
    Ok(lhs.max_abs_diff(&rhs))
}

/// Residuals of the generator duality `L^X H = H (L^Y)^T`, together with the
/// sampled semi-group consequence `exp(t L^X) H = H exp(t L^Y)^T`.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorDualityReport {
    pub generator_residual: f64,
    pub semigroup_residuals: Vec<(f64, f64)>,
}

impl GeneratorDualityReport {
    pub fn holds(&self) -> bool {
        self.generator_residual <= TOL_DUALITY
            && self
                .semigroup_residuals
                .iter()
                .all(|&(_, r)| r <= TOL_SEMIGROUP)
    }
}

pub const SEMIGROUP_SAMPLE_TIMES: [f64; 3] = [0.1, 0.5, 1.0];

pub fn check_duality_generators(
    lx: &GeneratorMatrix,
    ly: &GeneratorMatrix,
    h: &DualityMatrix,
) -> Result<GeneratorDualityReport> {
    check_dims(lx.n(), ly.n(), h, "check_duality_generators")?;
    let generator_residual = lx
        .mat()
        .matmul(h.mat())
        .max_abs_diff(&h.mat().matmul(&ly.mat().transpose()));
    let mut semigroup_residuals = Vec::with_capacity(SEMIGROUP_SAMPLE_TIMES.len());
    for &t in &SEMIGROUP_SAMPLE_TIMES {
        let px = lx.transition_matrix(t)?;
        let qy = ly.transition_matrix(t)?;
        let r = px
            .mat()
            .matmul(h.mat())
            .max_abs_diff(&h.mat().matmul(&qy.mat().transpose()));
        semigroup_residuals.push((t, r));
    }
    Ok(GeneratorDualityReport {
        generator_residual,
        semigroup_residuals,
    })
}

/// Outcome of the dual-existence dichotomy for `(P, H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// A stochastic dual exists (the column hull is invariant).
    ExistsStochastic,
    /// Only signed solutions exist: the column span is invariant but the
    /// hull is not. Reported without a probabilistic reading.
    ExistsSignedOnly,
    /// Not even a signed solution: the span is not invariant.
    None,
}

#[derive(Debug, Clone)]
pub struct DualitySolveResult {
    pub status: SolveStatus,
    /// Stochastic dual when status is `ExistsStochastic`.
    pub dual: Option<StochasticMatrix>,
    /// Row-wise signed solution when at least the span is invariant.
    pub signed_dual: Option<Mat>,
    /// Per-column solve residuals `|H q_y - P h_y|_inf`.
    pub column_residuals: Vec<f64>,
    /// True when H has a trivial right null space, which makes the dual
    /// unique; otherwise any feasible dual is returned and flagged here.
    pub unique: bool,
}

/// Solve `P H = H Q^T` for `Q`, row by row.
///
/// For each column `h_y` of `H` the target is `P h_y`. A signed solution is
/// sought by pivoted elimination with a consistency test; a stochastic row is
/// sought by LP feasibility over `{nu >= 0, sum nu = 1, H nu = P h_y}`. The
/// statuses of the two searches combine into the dichotomy: stochastic dual
/// iff every column stays in the convex hull, signed dual iff every column
/// stays in the span.
pub fn solve_dual(p: &StochasticMatrix, h: &DualityMatrix) -> Result<DualitySolveResult> {
    p.require_square("solve_dual")?;
    check_dims(p.n(), h.n_cols(), h, "solve_dual")?;
    let n_f = h.n_cols();
    let targets = p.mat().matmul(h.mat()); // column y holds P h_y
    let scale = h.mat().max_abs().max(1.0);

    let (rank, _) = h.mat().rank_and_null_space(TOL_PIVOT);
    let unique = rank == n_f;

    let mut signed_rows: Vec<Vec<f64>> = Vec::with_capacity(n_f);
    let mut stochastic_rows: Vec<Vec<f64>> = Vec::with_capacity(n_f);
    let mut column_residuals = Vec::with_capacity(n_f);
    let mut span_ok = true;
    let mut hull_ok = true;

    for y in 0..n_f {
        let target = targets.col(y);
        let b = Mat::from_rows(&target.iter().map(|&v| vec![v]).collect::<Vec<_>>())?;
        let (q, _) = h.mat().solve_consistent(&b, false)?;
        let q: Vec<f64> = (0..n_f).map(|j| q[(j, 0)]).collect();
        let achieved = h.mat().matvec(&q);
        let resid = achieved
            .iter()
            .zip(&target)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        column_residuals.push(resid);
        if resid > TOL_DUALITY * scale {
            span_ok = false;
        } else {
            signed_rows.push(q);
        }

        if hull_ok {
            let lp = lp::in_convex_hull_of_columns(h.mat(), &target);
            match lp.point {
                Some(nu) if lp.feasible => stochastic_rows.push(nu),
                _ => hull_ok = false,
            }
        }
    }

    if !span_ok {
        return Ok(DualitySolveResult {
            status: SolveStatus::None,
            dual: None,
            signed_dual: None,
            column_residuals,
            unique,
        });
    }
    let signed_dual = Some(Mat::from_rows(&signed_rows)?);
    if hull_ok {
        let mut q = Mat::from_rows(&stochastic_rows)?;
        // LP rows satisfy the simplex constraints to pivot accuracy; snap the
        // row sums before validation.
        for i in 0..q.n_rows() {
            let s: f64 = q.row(i).iter().sum();
            if s > 0.0 {
                for v in q.row_mut(i) {
                    *v /= s;
                }
            }
        }
        let dual = StochasticMatrix::new(q)?;
        Ok(DualitySolveResult {
            status: SolveStatus::ExistsStochastic,
            dual: Some(dual),
            signed_dual,
            column_residuals,
            unique,
        })
    } else {
        Ok(DualitySolveResult {
            status: SolveStatus::ExistsSignedOnly,
            dual: None,
            signed_dual,
            column_residuals,
            unique,
        })
    }
}

/// Per-column certificate of the convex-hull invariance test.
#[derive(Debug, Clone, Serialize)]
pub struct ColumnCertificate {
    pub column: usize,
    pub feasible: bool,
    pub phase1_objective: f64,
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct V1PlusReport {
    pub invariant: bool,
    pub first_violating_column: Option<usize>,
    pub certificates: Vec<ColumnCertificate>,
}

/// Does every column image `P h_y` stay in the convex hull of the columns of
/// `H`? This is the existence criterion for a stochastic dual.
pub fn check_v1plus_invariance(p: &StochasticMatrix, h: &DualityMatrix) -> Result<V1PlusReport> {
    p.require_square("check_v1plus_invariance")?;
    check_dims(p.n(), h.n_cols(), h, "check_v1plus_invariance")?;
    let targets = p.mat().matmul(h.mat());
    let mut certificates = Vec::with_capacity(h.n_cols());
    let mut first_violating_column = None;
    for y in 0..h.n_cols() {
        let target = targets.col(y);
        let lp = lp::in_convex_hull_of_columns(h.mat(), &target);
        if !lp.feasible && first_violating_column.is_none() {
            first_violating_column = Some(y);
        }
        certificates.push(ColumnCertificate {
            column: y,
            feasible: lp.feasible,
            phase1_objective: lp.phase1_objective,
            witness: lp.point,
        });
    }
    Ok(V1PlusReport {
        invariant: first_violating_column.is_none(),
        first_violating_column,
        certificates,
    })
}

/// Result of matching two eigenvalue multisets within the spectral tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub pass: bool,
    pub max_matched_distance: f64,
    pub matched: Vec<(Eigenvalue, Eigenvalue, f64)>,
    pub unmatched_left: Vec<Eigenvalue>,
    pub unmatched_right: Vec<Eigenvalue>,
    pub tolerance: f64,
}

/// Compare the eigenvalue multisets of two square matrices. Dual chains with
/// an invertible duality function are similar, hence isospectral; the report
/// carries a maximum matching of the two multisets within the tolerance and
/// lists whatever could not be paired.
pub fn spectrum_compare(a: &Mat, b: &Mat) -> Result<SpectrumReport> {
    spectrum_compare_with_tol(a, b, TOL_SPECTRAL)
}

pub fn spectrum_compare_with_tol(a: &Mat, b: &Mat, tol: f64) -> Result<SpectrumReport> {
    let ea = eigenvalues(a)?;
    let eb = eigenvalues(b)?;
    // Maximum bipartite matching in the graph of pairs within tolerance
    // (Kuhn's augmenting paths); n is a few hundred at most.
    let n = ea.len();
    let m = eb.len();
    let adj: Vec<Vec<usize>> = ea
        .iter()
        .map(|x| {
            (0..m)
                .filter(|&j| x.dist(&eb[j]) <= tol)
                .collect::<Vec<_>>()
        })
        .collect();
    let mut match_right: Vec<Option<usize>> = vec![None; m];

    fn try_augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if match_right[v].is_none()
                || try_augment(match_right[v].unwrap(), adj, seen, match_right)
            {
                match_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut matched_count = 0;
    for u in 0..n {
        let mut seen = vec![false; m];
        if try_augment(u, &adj, &mut seen, &mut match_right) {
            matched_count += 1;
        }
    }

    let mut matched = Vec::with_capacity(matched_count);
    let mut used_left = vec![false; n];
    for (v, mu) in match_right.iter().enumerate() {
        if let Some(u) = mu {
            matched.push((ea[*u], eb[v], ea[*u].dist(&eb[v])));
            used_left[*u] = true;
        }
    }
    matched.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));
    let unmatched_left: Vec<Eigenvalue> = (0..n).filter(|&u| !used_left[u]).map(|u| ea[u]).collect();
    let unmatched_right: Vec<Eigenvalue> = (0..m)
        .filter(|&v| match_right[v].is_none())
        .map(|v| eb[v])
        .collect();
    let max_matched_distance = matched.iter().fold(0.0f64, |mx, t| mx.max(t.2));
    Ok(SpectrumReport {
        pass: n == m && matched_count == n,
        max_matched_distance,
        matched,
        unmatched_left,
        unmatched_right,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IntertwiningReport {
    pub intertwining_residual: f64,
    pub mu_reversibility_residual: f64,
    pub nu_reversibility_residual: f64,
    pub pass: bool,
}

fn reversibility_residual(p: &StochasticMatrix, mu: &ProbabilityVector) -> (f64, usize, usize) {
    let n = p.n();
    let mut worst = 0.0;
    let mut pair = (0, 0);
    for x in 0..n {
        for y in x + 1..n {
            let r = (mu.entries()[x] * p.mat()[(x, y)] - mu.entries()[y] * p.mat()[(y, x)]).abs();
            if r > worst {
                worst = r;
                pair = (x, y);
            }
        }
    }
    (worst, pair.0, pair.1)
}

/// Finite intertwining comparison of two reversible chains: with
/// `T = H diag(nu)`, duality is equivalent to `P T = T Q`, which realizes the
/// unitary-equivalence statement for reversible duals at matrix level.
/// Reversibility of `mu` for `P` and `nu` for `Q` is a precondition, checked
/// tighter than the conclusion.
pub fn reversible_intertwining_check(
    p: &StochasticMatrix,
    q: &StochasticMatrix,
    h: &DualityMatrix,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
) -> Result<IntertwiningReport> {
    p.require_square("reversible_intertwining_check")?;
    q.require_square("reversible_intertwining_check")?;
    check_dims(p.n(), q.n(), h, "reversible_intertwining_check")?;
    if mu.n() != p.n() || nu.n() != q.n() {
        return Err(Error::Dimension {
            context: "reversible_intertwining_check",
            expected: format!("mu of size {} and nu of size {}", p.n(), q.n()),
            got: format!("{} and {}", mu.n(), nu.n()),
        });
    }
    let (mu_res, mx, my) = reversibility_residual(p, mu);
    if mu_res > TOL_REVERSIBLE {
        return Err(Error::NotReversible {
            side: "mu for P",
            x: mx,
            y: my,
            residual: mu_res,
        });
    }
    let (nu_res, nx, ny) = reversibility_residual(q, nu);
    if nu_res > TOL_REVERSIBLE {
        return Err(Error::NotReversible {
            side: "nu for Q",
            x: nx,
            y: ny,
            residual: nu_res,
        });
    }
    let mut t = h.mat().clone();
    for i in 0..t.n_rows() {
        for j in 0..t.n_cols() {
            t[(i, j)] *= nu.entries()[j];
        }
    }
    let resid = p.mat().matmul(&t).max_abs_diff(&t.matmul(q.mat()));
    Ok(IntertwiningReport {
        intertwining_residual: resid,
        mu_reversibility_residual: mu_res,
        nu_reversibility_residual: nu_res,
        pass: resid <= TOL_DUALITY,
    })
}

/// Judge a duality residual against (possibly overridden) tolerances.
pub fn duality_holds(residual: f64, tol: &Tolerances) -> bool {
    residual <= tol.duality
}
