//! Tensor-structured duality functions for spin systems: the coalescing
//! indicator `1{x ^ y = 0}`, the annihilating sign `(-1)^{|x ^ y|}`, and the
//! general `q^{|x ^ y|}`, all products of one 2x2 factor; plus degeneracy
//! analysis of lifted (column-duplicated) functions.
//!
//!     cargo run --example tensor_duality

use duality_kit::algebra::{build_tensor_duality, nondegeneracy_check, TensorKind};
use duality_kit::linalg::DualityMatrix;
use duality_kit::pathsim::QParameter;

fn main() {
    let hc = build_tensor_duality(TensorKind::Coalescing, 1).unwrap();
    println!("coalescing factor: {:?}", hc.mat().to_rows());
    let ha = build_tensor_duality(TensorKind::Annihilating, 1).unwrap();
    println!("annihilating factor: {:?}", ha.mat().to_rows());
    let q = QParameter::new(1, 2).unwrap();
    let hq = build_tensor_duality(TensorKind::Q(q), 2).unwrap();
    println!("q = 1/2 tensor on two sites:");
    for row in hq.mat().rows_iter() {
        println!("  {row:?}");
    }

    let rep = nondegeneracy_check(&build_tensor_duality(TensorKind::Coalescing, 4).unwrap());
    println!(
        "coalescing H on 4 sites: rank {}, invertible {}",
        rep.rank, rep.invertible
    );

    // Duplicating a column makes the bilinear form degenerate, with the
    // difference of the two unit vectors in the right null space.
    let lifted = DualityMatrix::from_rows(&[
        vec![1.0, 0.0, 0.0, 1.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap();
    let rep = nondegeneracy_check(&lifted);
    println!(
        "lifted H: rank {}, null-space basis {:?}",
        rep.rank, rep.right_null_space
    );
}
