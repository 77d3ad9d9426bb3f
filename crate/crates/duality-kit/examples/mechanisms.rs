//! The basic mechanisms of spin-system graphical representations, their
//! exact q-dual pairings, and componentwise monotonicity.
//!
//!     cargo run --example mechanisms

use duality_kit::pathsim::{
    is_q_dual_mechanism, mechanism_monotone, standard_mechanisms, BasicMechanism, QParameter,
};

fn main() {
    println!("standard mechanisms:");
    for (m, description) in standard_mechanisms() {
        println!(
            "  {:4} (0,0)->{:?} (0,1)->{:?} (1,0)->{:?} (1,1)->{:?}  {}",
            m.name,
            m.apply((0, 0)),
            m.apply((0, 1)),
            m.apply((1, 0)),
            m.apply((1, 1)),
            description
        );
    }

    println!("\nq-dual pairings (exact, all 16 endpoint pairs):");
    let cases = [
        ("fR", "fC", "0"),
        ("fR", "fA", "-1"),
        ("fD", "fD", "-1"),
        ("fBA", "fBA", "-1"),
        ("fR", "fD", "0"),
    ];
    for (f, g, q) in cases {
        let fm = BasicMechanism::by_name(f).unwrap();
        let gm = BasicMechanism::by_name(g).unwrap();
        let rep = is_q_dual_mechanism(&fm, &gm, QParameter::parse(q).unwrap());
        match rep.witness {
            None => println!("  ({f}, {g}) are {q}-dual"),
            Some(w) => println!("  ({f}, {g}) are NOT {q}-dual, witness {w:?}"),
        }
    }

    println!("\nmonotonicity:");
    for name in ["fR", "fC", "fA", "fD", "fBC", "fBA"] {
        let m = BasicMechanism::by_name(name).unwrap();
        let rep = mechanism_monotone(&m);
        match rep.witness {
            None => println!("  {name}: monotone"),
            Some((x, y)) => println!("  {name}: not monotone, witness {x:?} <= {y:?}"),
        }
    }
}
