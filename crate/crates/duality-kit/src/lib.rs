//! Construct, solve and verify dualities of Markov processes on finite state
//! spaces.
//!
//! Two chains `X` on `E` and `Y` on `F` are dual with respect to a function
//! `H: E x F -> R` when `E_x H(X_t, y) = E^y H(x, Y_t)`; on finite spaces
//! that is the matrix identity `P H = H Q^T` (or `L H = H Lhat^T` for
//! generators). The crate covers:
//!
//! - [`linalg`]: stochastic / generator matrices, the uniformization matrix
//!   exponential, stationary distributions, dense nonsymmetric eigenvalues.
//! - [`algebra`]: the duality equation and its solver (signed solutions by
//!   elimination, stochastic ones by LP feasibility per column), Siegmund
//!   duals of monotone chains, diagonal / measure duality conversions,
//!   resolvent duality, spectrum comparison, reversible intertwining, tensor
//!   duality functions, and the exclusion-process symmetry example.
//! - [`cone`]: extremal-column geometry, the decomposition kernel, cone and
//!   jump duals, and the strongly continuous dual generator.
//! - [`pathsim`]: exact event-driven graphical representations, q-dual basic
//!   mechanisms, strong and conditional pathwise duality verification, and
//!   count-level (hypergeometric) dualities of exchangeable systems.
//! - [`scaling`]: Gillespie jump chains, the Euler-Maruyama diffusion limit,
//!   the classical moment duality and rescaling convergence experiments.
//!
//! Every stochastic routine takes an explicit seed and is bit-for-bit
//! reproducible, including under the replica-parallel runner. The `examples/`
//! directory carries one runnable program per capability; a thin `duality-kit`
//! binary exposes the same operations as subcommands.

pub mod algebra;
pub mod cli;
pub mod cone;
pub mod error;
pub mod io;
pub mod linalg;
pub mod parallel;
pub mod pathsim;
pub mod report;
pub mod rng;
pub mod scaling;
pub mod tol;

pub use error::{Error, Result};
