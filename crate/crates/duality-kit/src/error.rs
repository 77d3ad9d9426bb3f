use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix validation failed: {0}")]
    Validation(String),

    #[error("negative time t = {0}")]
    NegativeTime(f64),

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error("eigenvalue iteration failed to converge for trailing index {index} after {iterations} iterations")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("stationary solve did not converge: residual {residual:e} exceeds {tolerance:e}")]
    StationaryResidual { residual: f64, tolerance: f64 },

    #[error("matrix is not stochastically monotone: witness (x, y, z) = ({x}, {y}, {z})")]
    NotMonotone { x: usize, y: usize, z: usize },

    #[error("reversibility precondition failed for {side}: worst pair ({x}, {y}), residual {residual:e}")]
    NotReversible {
        side: &'static str,
        x: usize,
        y: usize,
        residual: f64,
    },

    #[error("duality matrix is not diagonal: nonzero off-diagonal entry at ({row}, {col})")]
    NotDiagonal { row: usize, col: usize },

    #[error("weak measure duality precondition failed: residual {0:e}")]
    NotMeasureDual(f64),

    #[error("invalid rational '{0}': expected p/r with r > 0 and value in [-1, 1)")]
    InvalidRational(String),

    #[error("mechanism pair is not {q}-dual: witness x = {x:?}, y = {y:?}")]
    MechanismNotDual { q: String, x: (u8, u8), y: (u8, u8) },

    #[error("rate table is not symmetric at (i, j, k) = ({i}, {j}, {k}); pathwise verification requires symmetric rates")]
    AsymmetricRates { i: usize, j: usize, k: usize },

    #[error("site count {0} exceeds the dense cap of {1} sites")]
    TooManySites(usize, usize),

    #[error("convex set of columns is not a simplex; the jump/cone construction does not apply, use solve_dual instead")]
    NotSimplex,

    #[error("column set is not invariant under the dynamics: violating column {column}, residual {residual:e}")]
    InvarianceViolated { column: usize, residual: f64 },

    #[error("restricted generator is not determined on the column span: inconsistent system, residual {0:e}")]
    RestrictedGeneratorUndetermined(f64),

    #[error("no rate shift lambda <= {0} makes the dual generator a valid Q-matrix; an upstream precondition is violated")]
    NoValidLambda(u64),

    #[error("population cap {cap} exceeded at count {count}")]
    PopulationCap { cap: u64, count: u64 },

    #[error("scaling hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
