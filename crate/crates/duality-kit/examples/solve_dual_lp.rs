//! The existence dichotomy for duals of a given chain and duality function:
//! a stochastic dual exists iff the convex hull of the columns of `H` is
//! invariant (decided by LP feasibility per column); invariance of the span
//! alone yields only signed solutions.
//!
//!     cargo run --example solve_dual_lp

use duality_kit::algebra::{check_v1plus_invariance, solve_dual, SolveStatus};
use duality_kit::linalg::{DualityMatrix, StochasticMatrix};

fn report(label: &str, p: &StochasticMatrix, h: &DualityMatrix) {
    let solved = solve_dual(p, h).unwrap();
    let invariance = check_v1plus_invariance(p, h).unwrap();
    println!("{label}:");
    println!(
        "  status = {:?}, unique = {}, hull invariant = {}",
        solved.status, solved.unique, invariance.invariant
    );
    if let Some(col) = invariance.first_violating_column {
        println!(
            "  first violating column {col}, phase-1 objective {:e}",
            invariance.certificates[col].phase1_objective
        );
    }
    if solved.status == SolveStatus::ExistsStochastic {
        let q = solved.dual.unwrap();
        println!("  dual rows:");
        for row in q.mat().rows_iter() {
            println!("    {row:?}");
        }
    } else if let Some(signed) = &solved.signed_dual {
        println!("  signed solution rows (no probabilistic reading):");
        for row in signed.rows_iter() {
            println!("    {row:?}");
        }
    }
}

fn main() {
    // Doubly stochastic chain with the identity H: the dual is P^T.
    let p = StochasticMatrix::from_rows(&[
        vec![0.2, 0.5, 0.3],
        vec![0.5, 0.3, 0.2],
        vec![0.3, 0.2, 0.5],
    ])
    .unwrap();
    report("doubly stochastic, H = I", &p, &DualityMatrix::identity(3));

    // A non-monotone two-state chain with the Siegmund indicator: the column
    // span is invariant (H is invertible) but the hull is not, so only a
    // signed solution exists.
    let flip = StochasticMatrix::from_rows(&[vec![0.1, 0.9], vec![0.9, 0.1]]).unwrap();
    report(
        "tail-flip chain, Siegmund H",
        &flip,
        &DualityMatrix::siegmund_indicator(2),
    );
}
