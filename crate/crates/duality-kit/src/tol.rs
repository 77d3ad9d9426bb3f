//! Central numeric tolerances.
//!
//! All default thresholds used across the crate live here so that tests are
//! deterministic and reports can echo the exact values they were judged
//! against. The duality relations themselves have no numerics; these are
//! artifact constants.

/// Entry nonnegativity slack. Entries in `[-TOL_ENTRY, 0)` are treated as
/// uniformization round-off and clamped to zero on validation.
pub const TOL_ENTRY: f64 = 1e-12;

/// Row-sum slack for stochastic matrices (sum 1) and generators (sum 0).
pub const TOL_ROW: f64 = 1e-10;

/// Eigenvalue comparison tolerance.
pub const TOL_SPECTRAL: f64 = 1e-8;

/// Duality residual threshold: `PH = HQ^T` holds iff the max-norm residual
/// is at or below this.
pub const TOL_DUALITY: f64 = 1e-9;

/// Semi-group duality residual threshold used when sampling `exp(tL)`.
pub const TOL_SEMIGROUP: f64 = 1e-8;

/// Reversibility preconditions are held tighter than duality conclusions.
pub const TOL_REVERSIBLE: f64 = 1e-10;

/// LP feasibility: phase-1 objective above this declares infeasibility.
pub const TOL_LP: f64 = 1e-9;

/// Pivot threshold for rank decisions in row reduction.
pub const TOL_PIVOT: f64 = 1e-10;

/// Column geometry (extremality, decomposition kernel, projections).
pub const TOL_CONE: f64 = 1e-10;

/// Poisson tail mass at which the uniformization series is truncated.
pub const UNIFORMIZATION_TAIL: f64 = 1e-14;

/// Runtime-overridable check thresholds. Defaults mirror the constants; the
/// CLI exposes `--tol-duality` and `--tol-row`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerances {
    pub entry: f64,
    pub row: f64,
    pub duality: f64,
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            entry: TOL_ENTRY,
            row: TOL_ROW,
            duality: TOL_DUALITY,
            spectral: TOL_SPECTRAL,
        }
    }
}
