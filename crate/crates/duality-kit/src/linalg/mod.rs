//! Finite-state linear-algebra substrate: dense matrices with stochasticity
//! invariants, the uniformization matrix exponential, stationary
//! distributions, and dense nonsymmetric eigenvalues.

pub mod duality;
pub mod eig;
pub mod mat;
pub mod stochastic;

pub use duality::{DualityMatrix, StructureTag};
pub use eig::{eigenvalues, Eigenvalue};
pub use mat::Mat;
pub use stochastic::{
    validate_stochastic, GeneratorMatrix, ProbabilityVector, SignedVector, StochasticMatrix,
    ValidationReport,
};
