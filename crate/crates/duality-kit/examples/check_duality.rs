//! The duality equation `P H = H Q^T` on a small chain: the simple random
//! walk on {0, 1, 2, 3} absorbed at both ends is self-dual with the diagonal
//! function that charges the interior, and the residual is exactly zero.
//!
//!     cargo run --example check_duality

use duality_kit::algebra::{check_duality_discrete, check_duality_generators};
use duality_kit::linalg::{DualityMatrix, GeneratorMatrix, StochasticMatrix};

fn main() {
    let p = StochasticMatrix::from_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.5, 0.0, 0.5, 0.0],
        vec![0.0, 0.5, 0.0, 0.5],
        vec![0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let h = DualityMatrix::diagonal(&[0.0, 1.0, 1.0, 0.0]);
    let residual = check_duality_discrete(&p, &p, &h).unwrap();
    println!("absorbed walk, diagonal H = diag(0,1,1,0):");
    println!("  |PH - HP^T|_inf = {residual:e}  (self-duality, exact)");

    // Generator-level version: the two-state flip chain is self-dual with
    // the identity H because it is symmetric.
    let l = GeneratorMatrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
    let h2 = DualityMatrix::identity(2);
    let rep = check_duality_generators(&l, &l, &h2).unwrap();
    println!("flip generator, identity H:");
    println!("  generator residual  = {:e}", rep.generator_residual);
    for (t, r) in &rep.semigroup_residuals {
        println!("  semi-group residual at t = {t}: {r:e}");
    }
    println!("  holds: {}", rep.holds());
}
