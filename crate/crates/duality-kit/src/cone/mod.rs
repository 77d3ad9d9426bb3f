//! Constructive cone duality on finite state spaces.
//!
//! The columns of `H` span a convex set; its extremal columns carry the cone
//! dual, and when the set is a simplex every column has a unique convex
//! decomposition over the extremal ones — the kernel `Pi`. From the cone dual
//! `R` on the extremal representatives one obtains the jump dual
//! `Q = (R 0; Pi21 R 0)` on all of `F`, and, in continuous time, a bona fide
//! generator `Lhat = B PiHat + lambda (PiHat - id)` whose off-diagonal rates
//! are made nonnegative by a minimal integer rate shift `lambda`.
//!
//! Duplicate columns are collapsed to their lowest-index representative,
//! which fixes the (otherwise arbitrary) embedding of extremal points back
//! into `F`.

use serde::Serialize;

use crate::algebra::{check_v1plus_invariance, lp};
use crate::error::{Error, Result};
use crate::linalg::mat::Mat;
use crate::linalg::{DualityMatrix, GeneratorMatrix, StochasticMatrix};
use crate::tol::{TOL_CONE, TOL_DUALITY, TOL_ENTRY};

/// Extremal-column geometry of the convex set spanned by the columns of `H`.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalStructure {
    /// Representative indices of the extremal columns (sorted ascending).
    pub extremal_indices: Vec<usize>,
    /// For every column, the lowest index holding an equal column.
    pub class_representative: Vec<usize>,
    /// Column data of the extremal representatives, in index order.
    pub extremal_columns: Vec<Vec<f64>>,
    /// Whether the extremal columns are affinely independent, i.e. whether
    /// every decomposition over them is unique.
    pub simplex: bool,
}

/// Identify duplicate classes and extremal columns. A column is extremal iff
/// it is not a convex combination of the other distinct columns (an LP per
/// column); duplicates are collapsed first.
pub fn extremal_columns(h: &DualityMatrix) -> ExtremalStructure {
    let n_cols = h.n_cols();
    assert!(n_cols > 0, "H must have at least one column");
    let cols: Vec<Vec<f64>> = (0..n_cols).map(|j| h.mat().col(j)).collect();

    let mut class_representative = vec![0usize; n_cols];
    for j in 0..n_cols {
        let mut rep = j;
        for k in 0..j {
            let equal = cols[j]
                .iter()
                .zip(&cols[k])
                .all(|(a, b)| (a - b).abs() <= TOL_CONE);
            if equal {
                rep = class_representative[k];
                break;
            }
        }
        class_representative[j] = rep;
    }
    let reps: Vec<usize> = (0..n_cols).filter(|&j| class_representative[j] == j).collect();

    let mut extremal_indices = Vec::new();
    for &j in &reps {
        let others: Vec<usize> = reps.iter().copied().filter(|&k| k != j).collect();
        let sub = Mat::from_fn(h.n_rows(), others.len(), |r, c| cols[others[c]][r]);
        let feasible = lp::in_convex_hull_of_columns(&sub, &cols[j]).feasible;
        if !feasible {
            extremal_indices.push(j);
        }
    }
    let extremal_column_data: Vec<Vec<f64>> =
        extremal_indices.iter().map(|&j| cols[j].clone()).collect();
    let simplex = affinely_independent(&extremal_column_data);
    ExtremalStructure {
        extremal_indices,
        class_representative,
        extremal_columns: extremal_column_data,
        simplex,
    }
}

fn affinely_independent(columns: &[Vec<f64>]) -> bool {
    if columns.len() <= 2 {
        return true;
    }
    let base = &columns[0];
    let diffs = Mat::from_fn(base.len(), columns.len() - 1, |r, c| {
        columns[c + 1][r] - base[r]
    });
    let (rank, _) = diffs.rank_and_null_space(TOL_CONE);
    rank == columns.len() - 1
}

/// Affine independence of the extremal columns: the unique-decomposition
/// property of the convex set they span.
pub fn simplex_test(structure: &ExtremalStructure) -> bool {
    affinely_independent(&structure.extremal_columns)
}

/// The augmented system `[E; 1^T] w = [target; 1]` whose unique solution is
/// the convex decomposition of `target` over the extremal columns `E`.
fn decomposition_system(extremal: &[Vec<f64>]) -> Mat {
    let n_rows = extremal[0].len();
    Mat::from_fn(n_rows + 1, extremal.len(), |r, c| {
        if r < n_rows {
            extremal[c][r]
        } else {
            1.0
        }
    })
}

fn decompose_over_extremals(
    system: &Mat,
    target: &[f64],
    reverse_order: bool,
) -> Result<(Vec<f64>, f64)> {
    let mut rhs: Vec<Vec<f64>> = target.iter().map(|&v| vec![v]).collect();
    rhs.push(vec![1.0]);
    let b = Mat::from_rows(&rhs)?;
    let (w, resid) = system.solve_consistent(&b, reverse_order)?;
    let weights: Vec<f64> = (0..system.n_cols()).map(|j| w[(j, 0)]).collect();
    // Residual over the full system, not only the unpivoted rows.
    let achieved = system.matvec(&weights);
    let mut full_resid = resid;
    for (i, &t) in target.iter().enumerate() {
        full_resid = full_resid.max((achieved[i] - t).abs());
    }
    full_resid = full_resid.max((achieved[target.len()] - 1.0).abs());
    Ok((weights, full_resid))
}

/// The decomposition kernel `Pi`: for each column `y` of `H`, the unique
/// probability row expressing `H(., y)` over the extremal columns. Rows at
/// the extremal representatives form an exact identity block. Requires the
/// simplex property; refuse otherwise (the general solver still applies).
pub fn decomposition_kernel(h: &DualityMatrix) -> Result<(ExtremalStructure, StochasticMatrix)> {
    let structure = extremal_columns(h);
    let pi = decomposition_kernel_with_order(h, &structure, false)?;
    Ok((structure, pi))
}

/// Pivot-order-controlled variant: results must agree entrywise regardless
/// of the elimination order.
pub fn decomposition_kernel_with_order(
    h: &DualityMatrix,
    structure: &ExtremalStructure,
    reverse_order: bool,
) -> Result<StochasticMatrix> {
    if !structure.simplex {
        return Err(Error::NotSimplex);
    }
    let k = structure.extremal_indices.len();
    let system = decomposition_system(&structure.extremal_columns);
    let mut pi = Mat::zeros(h.n_cols(), k);
    let mut solved: Vec<Option<Vec<f64>>> = vec![None; h.n_cols()];
    for y in 0..h.n_cols() {
        let rep = structure.class_representative[y];
        if let Some(pos) = structure.extremal_indices.iter().position(|&e| e == rep) {
            pi[(y, pos)] = 1.0;
            continue;
        }
        if solved[rep].is_none() {
            let target = h.mat().col(rep);
            let (mut w, resid) = decompose_over_extremals(&system, &target, reverse_order)?;
            if resid > TOL_CONE * h.mat().max_abs().max(1.0) {
                return Err(Error::InvarianceViolated {
                    column: rep,
                    residual: resid,
                });
            }
            for v in w.iter_mut() {
                if *v < 0.0 && *v >= -TOL_CONE {
                    *v = 0.0;
                }
            }
            if let Some(bad) = w.iter().position(|&v| v < 0.0) {
                // Unreachable in exact arithmetic (every column lies in the
                // hull of the extremal ones); a substantial negative weight
                // means the dedup and LP tolerances disagree about this
                // column.
                return Err(Error::Validation(format!(
                    "column {rep} decomposes with negative weight {:e} on extremal {bad}; \
                     column geometry is inconsistent at the working tolerance",
                    w[bad]
                )));
            }
            solved[rep] = Some(w);
        }
        let w = solved[rep].as_ref().unwrap();
        for (pos, &v) in w.iter().enumerate() {
            pi[(y, pos)] = v;
        }
    }
    StochasticMatrix::new(pi)
}

/// The stochastic projection `PiHat` on `F`: `Pi` with its columns embedded
/// at the representative indices. Idempotent, and `PiHat H^T = H^T`.
pub fn pi_hat(h: &DualityMatrix, structure: &ExtremalStructure, pi: &StochasticMatrix) -> StochasticMatrix {
    let n = h.n_cols();
    let mut m = Mat::zeros(n, n);
    for y in 0..n {
        for (pos, &e) in structure.extremal_indices.iter().enumerate() {
            m[(y, e)] = pi.mat()[(y, pos)];
        }
    }
    StochasticMatrix::new(m).expect("rows of Pi are probability rows")
}

/// Discrete-time cone dual: the unique stochastic matrix `R` on the extremal
/// representatives with `P h_{y1} = sum_e R(y1, e) h_e`. Errors when the
/// image of an extremal column leaves the convex hull (invariance failure),
/// naming the violating column.
pub fn cone_dual(
    p: &StochasticMatrix,
    h: &DualityMatrix,
) -> Result<(ExtremalStructure, StochasticMatrix, StochasticMatrix)> {
    p.require_square("cone_dual")?;
    if p.n() != h.n_rows() {
        return Err(Error::Dimension {
            context: "cone_dual",
            expected: format!("H with {} rows", p.n()),
            got: format!("{}x{}", h.n_rows(), h.n_cols()),
        });
    }
    let (structure, pi) = decomposition_kernel(h)?;
    let system = decomposition_system(&structure.extremal_columns);
    let k = structure.extremal_indices.len();
    let mut r = Mat::zeros(k, k);
    for (row, &y1) in structure.extremal_indices.iter().enumerate() {
        let target = p.mat().matvec(&h.mat().col(y1));
        let (mut w, resid) = decompose_over_extremals(&system, &target, false)?;
        if resid > TOL_CONE * h.mat().max_abs().max(1.0) {
            return Err(Error::InvarianceViolated {
                column: y1,
                residual: resid,
            });
        }
        for v in w.iter_mut() {
            if *v < 0.0 && *v >= -TOL_CONE {
                *v = 0.0;
            }
        }
        if let Some(bad) = w.iter().position(|&v| v < 0.0) {
            return Err(Error::InvarianceViolated {
                column: y1,
                residual: -w[bad],
            });
        }
        for (col, &v) in w.iter().enumerate() {
            r[(row, col)] = v;
        }
    }
    Ok((structure, pi, StochasticMatrix::new(r)?))
}

/// The jump dual on all of `F`: `Q(y, iota(e')) = sum_e Pi(y, e) R(e, e')`,
/// zero elsewhere. Satisfies the intertwining `Q Pi = Pi R`.
pub fn jump_dual(
    r: &StochasticMatrix,
    structure: &ExtremalStructure,
    pi: &StochasticMatrix,
) -> Result<StochasticMatrix> {
    let k = structure.extremal_indices.len();
    if r.n() != k || pi.mat().n_cols() != k {
        return Err(Error::Dimension {
            context: "jump_dual",
            expected: format!("R and Pi over {k} extremal columns"),
            got: format!("R {}x{}, Pi cols {}", r.n(), r.n(), pi.mat().n_cols()),
        });
    }
    let mixed = pi.mat().matmul(r.mat()); // |F| x k
    let n = pi.mat().n_rows();
    let mut q = Mat::zeros(n, n);
    for y in 0..n {
        for (pos, &e) in structure.extremal_indices.iter().enumerate() {
            q[(y, e)] = mixed[(y, pos)];
        }
    }
    StochasticMatrix::new(q)
}

/// Max-norm residual of the intertwining `Q Pi = Pi R`.
pub fn intertwining_residual(
    q: &StochasticMatrix,
    r: &StochasticMatrix,
    pi: &StochasticMatrix,
) -> f64 {
    q.mat()
        .matmul(pi.mat())
        .max_abs_diff(&pi.mat().matmul(r.mat()))
}

/// Continuous-time cone-dual generator on the extremal representatives:
/// the unique solution of `[E; 1^T] L_R^T = [L E; 0^T]`, i.e. the
/// restriction of the dual dynamics to the extremal columns.
pub fn cone_dual_generator(
    l: &GeneratorMatrix,
    structure: &ExtremalStructure,
) -> Result<GeneratorMatrix> {
    if !structure.simplex {
        return Err(Error::NotSimplex);
    }
    let system = decomposition_system(&structure.extremal_columns);
    let k = structure.extremal_indices.len();
    let n_e = l.n();
    let mut rhs = Mat::zeros(n_e + 1, k);
    for (col, cdata) in structure.extremal_columns.iter().enumerate() {
        let image = l.mat().matvec(cdata);
        for r in 0..n_e {
            rhs[(r, col)] = image[r];
        }
        // Bottom row stays 0: generator rows sum to zero.
    }
    let (x, resid) = system.solve_consistent(&rhs, false)?;
    // x = L_R^T; verify consistency over the whole system.
    let full_resid = system.matmul(&x).max_abs_diff(&rhs).max(resid);
    if full_resid > TOL_CONE * (l.mat().max_abs().max(1.0)) * system.n_rows() as f64 {
        return Err(Error::RestrictedGeneratorUndetermined(full_resid));
    }
    let mut l_r = x.transpose();
    for i in 0..k {
        for j in 0..k {
            if i != j && l_r[(i, j)] < 0.0 && l_r[(i, j)] >= -TOL_ENTRY {
                l_r[(i, j)] = 0.0;
            }
        }
    }
    GeneratorMatrix::new(l_r)
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuousDualReport {
    pub lambda: u64,
    /// Residual of `Lhat H^T = H^T L^T`.
    pub generator_duality_residual: f64,
    /// Sampled semi-group duality residuals `(t, |exp(tL) H - H exp(t Lhat)^T|)`.
    pub semigroup_residuals: Vec<(f64, f64)>,
    /// `|PiHat^2 - PiHat|`.
    pub projection_residual: f64,
    /// `|PiHat H^T - H^T|`.
    pub h_invariance_residual: f64,
}

pub struct ContinuousDual {
    pub structure: ExtremalStructure,
    pub pi: StochasticMatrix,
    pub pi_hat: StochasticMatrix,
    pub cone_generator: GeneratorMatrix,
    pub l_hat: GeneratorMatrix,
    pub report: ContinuousDualReport,
}

const LAMBDA_CAP: u64 = 1 << 20;
const INVARIANCE_SAMPLE_TIMES: [f64; 3] = [0.01, 0.1, 1.0];

/// Build a strongly continuous dual generator `Lhat` for `(L, H)`:
/// `Lhat = Btilde + lambda (PiHat - id)` with `Btilde` the cone-dual
/// generator pushed through `Pi`, and `lambda` the smallest integer `>= 1`
/// making every off-diagonal entry of `Lhat` nonnegative (within round-off).
///
/// Preconditions checked here: the column set is a simplex, and its convex
/// hull is invariant under `exp(tL)` sampled at three horizons.
pub fn continuous_dual_generator(l: &GeneratorMatrix, h: &DualityMatrix) -> Result<ContinuousDual> {
    if l.n() != h.n_rows() {
        return Err(Error::Dimension {
            context: "continuous_dual_generator",
            expected: format!("H with {} rows", l.n()),
            got: format!("{}x{}", h.n_rows(), h.n_cols()),
        });
    }
    let (structure, pi) = decomposition_kernel(h)?;
    for &t in &INVARIANCE_SAMPLE_TIMES {
        let p_t = l.transition_matrix(t)?;
        let inv = check_v1plus_invariance(&p_t, h)?;
        if let Some(column) = inv.first_violating_column {
            return Err(Error::InvarianceViolated {
                column,
                residual: inv.certificates[column].phase1_objective,
            });
        }
    }
    let cone_generator = cone_dual_generator(l, &structure)?;
    let hat = pi_hat(h, &structure, &pi);
    let n = h.n_cols();

    // Btilde = (Pi L_R) embedded at the representative columns.
    let mixed = pi.mat().matmul(cone_generator.mat());
    let mut b_tilde = Mat::zeros(n, n);
    for y in 0..n {
        for (pos, &e) in structure.extremal_indices.iter().enumerate() {
            b_tilde[(y, e)] = mixed[(y, pos)];
        }
    }

    let build = |lambda: f64| -> Mat {
        let mut m = b_tilde.clone();
        for y in 0..n {
            for z in 0..n {
                let shift = hat.mat()[(y, z)] - if y == z { 1.0 } else { 0.0 };
                m[(y, z)] += lambda * shift;
            }
        }
        m
    };
    let valid = |m: &Mat| -> bool {
        (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] >= -TOL_ENTRY))
    };

    // Minimal integer lambda: geometric scan, then binary search down.
    let mut lambda = 1u64;
    while lambda <= LAMBDA_CAP && !valid(&build(lambda as f64)) {
        lambda *= 2;
    }
    if lambda > LAMBDA_CAP {
        return Err(Error::NoValidLambda(LAMBDA_CAP));
    }
    let mut lo = (lambda / 2).max(1);
    let mut hi = lambda;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if valid(&build(mid as f64)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let lambda = hi;
    let l_hat = GeneratorMatrix::new(build(lambda as f64))?;

    let ht = h.mat().transpose();
    let generator_duality_residual = l_hat
        .mat()
        .matmul(&ht)
        .max_abs_diff(&ht.matmul(&l.mat().transpose()));
    let mut semigroup_residuals = Vec::new();
    for &t in &[0.1, 1.0] {
        let p_t = l.transition_matrix(t)?;
        let q_t = l_hat.transition_matrix(t)?;
        let resid = p_t
            .mat()
            .matmul(h.mat())
            .max_abs_diff(&h.mat().matmul(&q_t.mat().transpose()));
        semigroup_residuals.push((t, resid));
    }
    let projection_residual = hat.mat().matmul(hat.mat()).max_abs_diff(hat.mat());
    let h_invariance_residual = hat.mat().matmul(&ht).max_abs_diff(&ht);

    Ok(ContinuousDual {
        structure,
        pi,
        pi_hat: hat,
        cone_generator,
        l_hat,
        report: ContinuousDualReport {
            lambda,
            generator_duality_residual,
            semigroup_residuals,
            projection_residual,
            h_invariance_residual,
        },
    })
}

/// Convenience: does the continuous dual satisfy both defining properties?
pub fn continuous_dual_holds(report: &ContinuousDualReport) -> bool {
    report.generator_duality_residual <= TOL_DUALITY
        && report.semigroup_residuals.iter().all(|&(_, r)| r <= 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment_h() -> DualityMatrix {
        DualityMatrix::from_rows(&[vec![2.0, 0.0, 1.0, 0.0], vec![0.0, 2.0, 1.0, 2.0]]).unwrap()
    }

    #[test]
    fn wide_example_extremals_and_kernel_are_exact() {
        let h = segment_h();
        let (structure, pi) = decomposition_kernel(&h).unwrap();
        assert_eq!(structure.extremal_indices, vec![0, 1]);
        assert!(structure.simplex);
        assert!(simplex_test(&structure));
        assert_eq!(structure.class_representative, vec![0, 1, 2, 1]);
        let want = [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.0, 1.0]];
        for y in 0..4 {
            for e in 0..2 {
                assert_eq!(pi.mat()[(y, e)], want[y][e], "Pi({y},{e})");
            }
        }
    }

    #[test]
    fn identity_h_has_all_columns_extremal_and_identity_kernel() {
        let h = DualityMatrix::identity(3);
        let (structure, pi) = decomposition_kernel(&h).unwrap();
        assert_eq!(structure.extremal_indices, vec![0, 1, 2]);
        assert!(structure.simplex);
        assert_eq!(pi.mat().max_abs_diff(&Mat::identity(3)), 0.0);
    }

    #[test]
    fn planted_midpoint_column_is_not_extremal() {
        let h = DualityMatrix::from_rows(&[
            vec![1.0, 0.0, 0.5, 0.0],
            vec![0.0, 1.0, 0.5, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let s = extremal_columns(&h);
        assert_eq!(s.extremal_indices, vec![0, 1, 3]);
        let (_, pi) = decomposition_kernel(&h).unwrap();
        assert_eq!(pi.mat()[(2, 0)], 0.5);
        assert_eq!(pi.mat()[(2, 1)], 0.5);
    }

    #[test]
    fn planted_weights_are_recovered() {
        let h = DualityMatrix::from_rows(&[
            vec![1.0, 0.0, 0.3],
            vec![0.0, 1.0, 0.7],
        ])
        .unwrap();
        let (_, pi) = decomposition_kernel(&h).unwrap();
        assert!((pi.mat()[(2, 0)] - 0.3).abs() < 1e-12);
        assert!((pi.mat()[(2, 1)] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn square_in_the_plane_is_not_a_simplex() {
        // Four extremal corners with affine rank 2 < 3.
        let h = DualityMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
        ])
        .unwrap();
        let s = extremal_columns(&h);
        assert_eq!(s.extremal_indices.len(), 4);
        assert!(!s.simplex);
        assert!(matches!(decomposition_kernel(&h), Err(Error::NotSimplex)));
    }

    #[test]
    fn two_point_sets_are_always_simplices() {
        let h = DualityMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let s = extremal_columns(&h);
        assert_eq!(s.extremal_indices.len(), 2);
        assert!(s.simplex);
    }

    #[test]
    fn kernel_is_pivot_order_independent() {
        let h = DualityMatrix::from_rows(&[
            vec![1.5, 0.0, 0.9, 0.3],
            vec![0.0, 2.5, 0.7, 1.9],
            vec![0.5, 0.5, 0.5, 0.5],
        ])
        .unwrap();
        let structure = extremal_columns(&h);
        let a = decomposition_kernel_with_order(&h, &structure, false).unwrap();
        let b = decomposition_kernel_with_order(&h, &structure, true).unwrap();
        assert!(a.mat().max_abs_diff(b.mat()) <= 1e-10);
    }

    #[test]
    fn cone_dual_of_identity_is_identity() {
        let h = segment_h();
        let p = StochasticMatrix::identity(2);
        let (_, _, r) = cone_dual(&p, &h).unwrap();
        assert!(r.mat().max_abs_diff(&Mat::identity(2)) <= 1e-12);
    }

    #[test]
    fn swap_chain_swaps_the_extremal_columns() {
        let h = segment_h();
        let p = StochasticMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let (structure, pi, r) = cone_dual(&p, &h).unwrap();
        assert_eq!(r.mat().to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        // Jump dual rows for the non-extremal columns are Pi-mixtures of the
        // swapped extremals.
        let q = jump_dual(&r, &structure, &pi).unwrap();
        assert_eq!(q.mat().row(2), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(q.mat().row(3), &[1.0, 0.0, 0.0, 0.0]);
        assert!(intertwining_residual(&q, &r, &pi) <= 1e-12);
    }

    #[test]
    fn jump_dual_of_identity_is_the_projection() {
        let h = segment_h();
        let (structure, pi) = decomposition_kernel(&h).unwrap();
        let r = StochasticMatrix::identity(2);
        let q = jump_dual(&r, &structure, &pi).unwrap();
        let hat = pi_hat(&h, &structure, &pi);
        assert_eq!(q.mat().max_abs_diff(hat.mat()), 0.0);
        // PiHat is an exact idempotent fixing H^T.
        assert_eq!(hat.mat().matmul(hat.mat()).max_abs_diff(hat.mat()), 0.0);
        let ht = h.mat().transpose();
        assert_eq!(hat.mat().matmul(&ht).max_abs_diff(&ht), 0.0);
    }

    #[test]
    fn zero_generator_dual_routes_back_to_extremals() {
        let h = segment_h();
        let l = GeneratorMatrix::zero(2);
        let dual = continuous_dual_generator(&l, &h).unwrap();
        assert_eq!(dual.report.lambda, 1);
        // Lhat = lambda (PiHat - id): rows of F2 jump to their mixture.
        let want = Mat::from_rows(&[
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.5, 0.5, -1.0, 0.0],
            vec![0.0, 1.0, 0.0, -1.0],
        ])
        .unwrap();
        assert_eq!(dual.l_hat.mat().max_abs_diff(&want), 0.0);
        assert_eq!(dual.report.generator_duality_residual, 0.0);
    }

    #[test]
    fn flip_generator_continuous_dual_is_a_q_matrix_with_tiny_residuals() {
        let h = segment_h();
        let l = GeneratorMatrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let dual = continuous_dual_generator(&l, &h).unwrap();
        assert!(dual.report.generator_duality_residual <= 1e-9);
        assert!(dual
            .report
            .semigroup_residuals
            .iter()
            .all(|&(_, r)| r <= 1e-8));
        assert!(continuous_dual_holds(&dual.report));
        assert!(dual.report.projection_residual <= 1e-12);
        assert!(dual.report.h_invariance_residual <= 1e-12);
        // The known minimal shift for this instance.
        assert_eq!(dual.report.lambda, 1);
        // Strong continuity at small times: |exp(tLhat) - I| <= t |Lhat| + o(t).
        let t = 1e-3;
        let q_t = dual.l_hat.transition_matrix(t).unwrap();
        let dev = q_t.mat().max_abs_diff(&Mat::identity(4));
        assert!(dev <= 1.05 * t * dual.l_hat.mat().max_abs());
    }

    #[test]
    fn hull_violation_is_reported_with_the_column() {
        // Shrinking H's hull: P pushes the first extremal column outside.
        let h = DualityMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let p = StochasticMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        match cone_dual(&p, &h) {
            Err(Error::InvarianceViolated { column, .. }) => assert_eq!(column, 0),
            other => panic!("expected invariance violation, got {other:?}"),
        }
    }

    #[test]
    fn duplicated_column_lift_reproduces_the_base_dual() {
        // H = identity with a duplicated column: the jump dual projected
        // through the duplicate classes equals the unique dual P^T of the
        // base H.
        let h = DualityMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let p = StochasticMatrix::from_rows(&[
            vec![0.2, 0.5, 0.3],
            vec![0.5, 0.3, 0.2],
            vec![0.3, 0.2, 0.5],
        ])
        .unwrap();
        let (structure, pi, r) = cone_dual(&p, &h).unwrap();
        assert_eq!(structure.extremal_indices, vec![0, 1, 2]);
        assert!(r.mat().max_abs_diff(&p.mat().transpose()) <= 1e-10);
        let q = jump_dual(&r, &structure, &pi).unwrap();
        // Row of the duplicate equals the row of its representative.
        for j in 0..4 {
            assert!((q.mat()[(3, j)] - q.mat()[(0, j)]).abs() <= 1e-12);
        }
    }
}
