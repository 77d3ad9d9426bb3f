//! Dual chains with an invertible duality function are similar, hence have
//! equal eigenvalue multisets. Solve for a dual and match the spectra.
//!
//!     cargo run --example spectrum_compare

use duality_kit::algebra::{solve_dual, spectrum_compare};
use duality_kit::linalg::{DualityMatrix, StochasticMatrix};

fn main() {
    // Random walk on a weighted triangle (weights 2, 1, 3): reversible with
    // stationary vector proportional to the vertex weight sums, so the
    // diagonal H built from 1/pi admits a stochastic dual.
    let p = StochasticMatrix::from_rows(&[
        vec![0.0, 2.0 / 3.0, 1.0 / 3.0],
        vec![0.4, 0.0, 0.6],
        vec![0.25, 0.75, 0.0],
    ])
    .unwrap();
    let h = DualityMatrix::diagonal(&[4.0, 2.4, 3.0]);
    let solved = solve_dual(&p, &h).unwrap();
    println!("solver status: {:?}", solved.status);
    let q = solved.dual.expect("stochastic dual exists for this pair");
    println!("dual rows:");
    for row in q.mat().rows_iter() {
        println!("  {row:?}");
    }
    let rep = spectrum_compare(p.mat(), q.mat()).unwrap();
    println!(
        "spectra match: {} (max matched distance {:e})",
        rep.pass, rep.max_matched_distance
    );
    for (a, b, d) in &rep.matched {
        println!(
            "  {:+.6}{:+.6}i  <->  {:+.6}{:+.6}i   (distance {d:.2e})",
            a.re, a.im, b.re, b.im
        );
    }
}
