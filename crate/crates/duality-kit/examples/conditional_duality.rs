//! Non-deterministic mechanisms: when each arrow picks one of two q-dual
//! mechanism pairs at random, the duality survives conditionally on the
//! arrow-type stream. With the type stream fixed, both sides are estimated
//! over independent arrow realizations.
//!
//!     cargo run --release --example conditional_duality

use duality_kit::pathsim::{
    conditional_duality_check, BasicMechanism, ConditionalDualityConfig, QParameter,
    SpinConfiguration,
};

fn main() {
    let cfg = ConditionalDualityConfig {
        n_sites: 6,
        pair1: (
            BasicMechanism::resampling(),
            BasicMechanism::walk_coalescence(),
        ),
        pair2: (
            BasicMechanism::branching_coalescence(),
            BasicMechanism::branching_coalescence(),
        ),
        q: QParameter::ZERO,
        p: 0.5,
        rate: 1.0,
        horizon: 0.5,
        replicas: 20_000,
        seed: 99,
        x0: SpinConfiguration::new(vec![1, 0, 0, 1, 0, 0]),
        y0: SpinConfiguration::new(vec![0, 1, 0, 0, 1, 0]),
    };
    let rep = conditional_duality_check(&cfg).unwrap();
    for e in &rep.estimates {
        println!("{}: {:.5} +- {:.5}", e.name, e.value, e.std_error);
    }
    println!("passed: {}", rep.passed);
}
