//! Cone duality on a wide duality matrix whose columns span a two-point
//! simplex: extremal columns, the unique decomposition kernel, the jump dual,
//! and the strongly continuous dual generator with its minimal rate shift.
//!
//!     cargo run --example cone_dual

use duality_kit::cone::{
    cone_dual, continuous_dual_generator, decomposition_kernel, jump_dual,
};
use duality_kit::linalg::{DualityMatrix, GeneratorMatrix, StochasticMatrix};

fn main() {
    let h =
        DualityMatrix::from_rows(&[vec![2.0, 0.0, 1.0, 0.0], vec![0.0, 2.0, 1.0, 2.0]]).unwrap();
    let (structure, pi) = decomposition_kernel(&h).unwrap();
    println!("extremal column indices: {:?}", structure.extremal_indices);
    println!("simplex: {}", structure.simplex);
    println!("decomposition kernel Pi:");
    for row in pi.mat().rows_iter() {
        println!("  {row:?}");
    }

    // Discrete time: the swap chain exchanges the two extremal columns.
    let swap = StochasticMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let (structure, pi, r) = cone_dual(&swap, &h).unwrap();
    println!("cone dual of the swap chain:");
    for row in r.mat().rows_iter() {
        println!("  {row:?}");
    }
    let q = jump_dual(&r, &structure, &pi).unwrap();
    println!("jump dual on the full column space:");
    for row in q.mat().rows_iter() {
        println!("  {row:?}");
    }

    // Continuous time: the flip generator gets a bona fide dual generator
    // after the minimal integer rate shift.
    let l = GeneratorMatrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
    let dual = continuous_dual_generator(&l, &h).unwrap();
    println!("continuous dual generator (lambda = {}):", dual.report.lambda);
    for row in dual.l_hat.mat().rows_iter() {
        println!("  {row:?}");
    }
    println!(
        "generator duality residual: {:e}",
        dual.report.generator_duality_residual
    );
    for (t, resid) in &dual.report.semigroup_residuals {
        println!("semi-group residual at t = {t}: {resid:e}");
    }
}
