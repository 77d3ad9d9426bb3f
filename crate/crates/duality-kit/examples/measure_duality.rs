//! Diagonal duality functions and duality with respect to a measure: the
//! walk killed at the boundary pairs with the uniform measure on the
//! interior, the boundary is a trap, and the resolvent kernel of a weakly
//! mu-dual generator pair is itself a duality function.
//!
//!     cargo run --example measure_duality

use duality_kit::algebra::{
    check_measure_duality, check_trap, diagonal_from_measure, measure_from_diagonal,
    resolvent_duality_check,
};
use duality_kit::linalg::{DualityMatrix, GeneratorMatrix, Mat};

fn main() {
    // Diagonal H on the absorbed walk's state space.
    let h = DualityMatrix::diagonal(&[0.0, 1.0, 1.0, 0.0]);
    let data = measure_from_diagonal(&h).unwrap();
    println!("measure from diag(0,1,1,0): {:?}", data.measure);
    println!("support: {:?}", data.support);
    let back = diagonal_from_measure(&data.measure);
    println!(
        "round trip exact: {}",
        back.mat().max_abs_diff(h.mat()) == 0.0
    );

    // Killed walk on the interior; the kernel is symmetric, so the uniform
    // measure closes the identity exactly, and the boundary is a trap.
    let killed = Mat::from_rows(&[
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.5, 0.0],
        vec![0.0, 0.5, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
    ])
    .unwrap();
    let residual = check_measure_duality(&killed, &killed, &data.measure).unwrap();
    println!("killed-walk measure-duality residual: {residual:e}");
    println!("boundary is a trap: {}", check_trap(&killed, &[0, 3]));

    // Resolvent duality for a reversible two-state generator.
    let l = GeneratorMatrix::from_rows(&[vec![-1.0, 1.0], vec![2.0, -2.0]]).unwrap();
    let mu = [2.0 / 3.0, 1.0 / 3.0];
    let rep = resolvent_duality_check(&l, &l, &mu, 1.0, 0.7).unwrap();
    println!(
        "resolvent duality at lambda = 1, t = 0.7: residual {:e} (weak duality {:e})",
        rep.residual, rep.weak_duality_residual
    );
}
