//! Basic mechanisms: total maps `{0,1}^2 -> {0,1}^2` applied at the two
//! endpoints of an arrow, and the exact q-dual relation between a forward
//! mechanism `f` and a backward mechanism `g`,
//! `q^{|x ^ (g(y+))+|} = q^{|f(x) ^ y|}` for all sixteen `(x, y)` pairs,
//! where `+` swaps the two coordinates (the arrow reversal).

use serde::Serialize;

use crate::pathsim::qvalue::QParameter;

pub type Pair = (u8, u8);

/// A named total map `{0,1}^2 -> {0,1}^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicMechanism {
    pub name: String,
    /// `table[x1][x2] = f(x1, x2)`.
    pub table: [[Pair; 2]; 2],
}

impl BasicMechanism {
    pub fn new(name: &str, table: [[Pair; 2]; 2]) -> Self {
        BasicMechanism {
            name: name.to_string(),
            table,
        }
    }

    #[inline]
    pub fn apply(&self, x: Pair) -> Pair {
        self.table[x.0 as usize][x.1 as usize]
    }

    pub fn identity() -> Self {
        BasicMechanism::new("id", [[(0, 0), (0, 1)], [(1, 0), (1, 1)]])
    }

    /// Resampling (voter transition): the second site copies the first.
    pub fn resampling() -> Self {
        BasicMechanism::new("fR", [[(0, 0), (0, 0)], [(1, 1), (1, 1)]])
    }

    /// Walk-coalescence: a particle at the first site jumps onto the second,
    /// merging when both are occupied.
    pub fn walk_coalescence() -> Self {
        BasicMechanism::new("fC", [[(0, 0), (0, 1)], [(0, 1), (0, 1)]])
    }

    /// Walk-annihilation: as the walk, but meeting particles kill each other.
    pub fn walk_annihilation() -> Self {
        BasicMechanism::new("fA", [[(0, 0), (0, 1)], [(0, 1), (0, 0)]])
    }

    /// Death at the first site, the particle moving to the second.
    pub fn death() -> Self {
        BasicMechanism::new("fD", [[(0, 0), (0, 0)], [(0, 1), (0, 1)]])
    }

    /// Branching-coalescence.
    pub fn branching_coalescence() -> Self {
        BasicMechanism::new("fBC", [[(0, 0), (0, 1)], [(1, 1), (1, 1)]])
    }

    /// Branching-annihilation.
    pub fn branching_annihilation() -> Self {
        BasicMechanism::new("fBA", [[(0, 0), (0, 1)], [(1, 1), (1, 0)]])
    }

    pub fn by_name(name: &str) -> Option<Self> {
        let m = match name {
            "id" => Self::identity(),
            "fR" | "resampling" => Self::resampling(),
            "fC" | "walk-coalescence" => Self::walk_coalescence(),
            "fA" | "walk-annihilation" => Self::walk_annihilation(),
            "fD" | "death" => Self::death(),
            "fBC" | "branching-coalescence" => Self::branching_coalescence(),
            "fBA" | "branching-annihilation" => Self::branching_annihilation(),
            _ => return None,
        };
        Some(m)
    }
}

/// The six standard mechanisms in table order, with their descriptions.
pub fn standard_mechanisms() -> Vec<(BasicMechanism, &'static str)> {
    vec![
        (BasicMechanism::resampling(), "resampling"),
        (BasicMechanism::walk_coalescence(), "walk-coalescence"),
        (BasicMechanism::walk_annihilation(), "walk-annihilation"),
        (BasicMechanism::death(), "death"),
        (BasicMechanism::branching_coalescence(), "branching-coalescence"),
        (BasicMechanism::branching_annihilation(), "branching-annihilation"),
    ]
}

#[inline]
fn dagger(x: Pair) -> Pair {
    (x.1, x.0)
}

#[inline]
fn overlap(x: Pair, y: Pair) -> u32 {
    ((x.0 & y.0) + (x.1 & y.1)) as u32
}

#[derive(Debug, Clone, Serialize)]
pub struct QDualReport {
    pub dual: bool,
    /// First violating `(x, y)` pair when not dual.
    pub witness: Option<(Pair, Pair)>,
}

/// Exhaustive check of the q-dual mechanism relation over all 16 pairs,
/// with H-values compared exactly in rational arithmetic (`0^0 = 1`).
pub fn is_q_dual_mechanism(f: &BasicMechanism, g: &BasicMechanism, q: QParameter) -> QDualReport {
    let bits = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)];
    for &x in &bits {
        for &y in &bits {
            let lhs = q.pow(overlap(x, dagger(g.apply(dagger(y)))));
            let rhs = q.pow(overlap(f.apply(x), y));
            if lhs != rhs {
                return QDualReport {
                    dual: false,
                    witness: Some((x, y)),
                };
            }
        }
    }
    QDualReport {
        dual: true,
        witness: None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotoneMechanismReport {
    pub monotone: bool,
    pub witness: Option<(Pair, Pair)>,
}

/// Componentwise monotonicity of a mechanism, exhaustively over the nine
/// comparable pairs.
pub fn mechanism_monotone(f: &BasicMechanism) -> MonotoneMechanismReport {
    let bits = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)];
    for &x in &bits {
        for &y in &bits {
            if x.0 <= y.0 && x.1 <= y.1 {
                let fx = f.apply(x);
                let fy = f.apply(y);
                if !(fx.0 <= fy.0 && fx.1 <= fy.1) {
                    return MonotoneMechanismReport {
                        monotone: false,
                        witness: Some((x, y)),
                    };
                }
            }
        }
    }
    MonotoneMechanismReport {
        monotone: true,
        witness: None,
    }
}

/// Dense generator of the spin system driven by one mechanism at a uniform
/// rate per ordered pair on the complete graph: configurations are indexed
/// with site 0 as the most significant bit.
pub fn mechanism_generator(
    f: &BasicMechanism,
    n_sites: usize,
    rate: f64,
) -> crate::error::Result<crate::linalg::GeneratorMatrix> {
    use crate::linalg::{GeneratorMatrix, Mat};
    if n_sites > 20 {
        return Err(crate::error::Error::TooManySites(n_sites, 20));
    }
    let size = 1usize << n_sites;
    let mut l = Mat::zeros(size, size);
    for state in 0..size {
        for i in 0..n_sites {
            for j in 0..n_sites {
                if i == j {
                    continue;
                }
                let bi = ((state >> (n_sites - 1 - i)) & 1) as u8;
                let bj = ((state >> (n_sites - 1 - j)) & 1) as u8;
                let (ai, aj) = f.apply((bi, bj));
                let mut target = state;
                if ai != bi {
                    target ^= 1 << (n_sites - 1 - i);
                }
                if aj != bj {
                    target ^= 1 << (n_sites - 1 - j);
                }
                if target != state {
                    l[(state, target)] += rate;
                    l[(state, state)] -= rate;
                }
            }
        }
    }
    GeneratorMatrix::new(l)
}

/// Arrow-type selector for non-deterministic mechanisms: type 1 (mechanism
/// `f1`) with probability `p`, type 2 (`f2`) otherwise. The type stream is
/// drawn from its own reserved seed stream, indexed by arrow order.
#[derive(Debug, Clone)]
pub struct RandomizedMechanism {
    pub f1: BasicMechanism,
    pub f2: BasicMechanism,
    pub p: f64,
}

impl RandomizedMechanism {
    pub fn new(f1: BasicMechanism, f2: BasicMechanism, p: f64) -> Self {
        assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
        RandomizedMechanism { f1, f2, p }
    }

    /// Deterministic type assignment for the first `n` arrows given the type
    /// stream seed: `true` selects `f1`.
    pub fn types(&self, type_seed: u64, n: usize) -> Vec<bool> {
        let mut s = crate::rng::Stream::from_seed(type_seed);
        (0..n).map(|_| s.bernoulli(self.p)).collect()
    }
}
