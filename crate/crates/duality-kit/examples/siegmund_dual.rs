//! Constructive Siegmund duality: a stochastically monotone chain has a dual
//! with respect to `1{x >= y}` built from its tail function, with any defect
//! mass absorbed by an appended cemetery state. Non-monotone chains are
//! rejected with the violating triple.
//!
//!     cargo run --example siegmund_dual

use duality_kit::algebra::{check_monotone, siegmund_dual};
use duality_kit::linalg::StochasticMatrix;

fn main() {
    let p = StochasticMatrix::from_rows(&[
        vec![0.7, 0.3, 0.0],
        vec![0.2, 0.5, 0.3],
        vec![0.0, 0.3, 0.7],
    ])
    .unwrap();
    println!("monotone? {}", check_monotone(&p).unwrap().monotone);
    let dual = siegmund_dual(&p).unwrap();
    println!("dual on the extended space (last state = cemetery):");
    for row in dual.extended.mat().rows_iter() {
        println!("  {row:?}");
    }
    println!("defect per dual state: {:?}", dual.defect);
    println!("partial-sum residual:  {:e}", dual.partial_sum_residual);
    println!("duality residual:      {:e}", dual.duality_residual);

    let flip = StochasticMatrix::from_rows(&[vec![0.1, 0.9], vec![0.9, 0.1]]).unwrap();
    match siegmund_dual(&flip) {
        Err(e) => println!("tail-flip chain rejected: {e}"),
        Ok(_) => unreachable!("the flip chain is not monotone"),
    }
}
