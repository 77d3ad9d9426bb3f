//! The oldest pathwise Siegmund duality: a random walk absorbed at 0 and one
//! reflected at 0, driven by the same arrow sequence read in opposite
//! directions, never swap order — the indicator `1{X_n <= Y_(N-n)}` is
//! constant along every realization.
//!
//!     cargo run --example absorbed_reflected_walk

use duality_kit::pathsim::rw_siegmund_pathwise;

fn main() {
    let mut holds = 0u32;
    let runs = 1000;
    for seed in 0..runs {
        let rep = rw_siegmund_pathwise(3, 2, 50, seed as u64);
        if rep.holds {
            holds += 1;
        }
    }
    println!("x = 3, y = 2, 50 steps: indicator constant on {holds}/{runs} runs");

    let rep = rw_siegmund_pathwise(0, 5, 30, 7);
    println!(
        "absorbed start at 0: indicator = {} (0 <= Y_N always)",
        rep.indicator
    );
}
