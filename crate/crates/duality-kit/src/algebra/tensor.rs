//! Tensor-structured duality functions for spin systems, and degeneracy
//! analysis of general duality matrices.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{DualityMatrix, StructureTag};
use crate::pathsim::qvalue::QParameter;
use crate::tol::TOL_PIVOT;

/// The three tensor families: `1{x^y = 0}`, `(-1)^{|x^y|}` and `q^{|x^y|}`,
/// all products over sites of a single 2x2 factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensorKind {
    Coalescing,
    Annihilating,
    Q(QParameter),
}

/// Build the `2^N x 2^N` tensor duality matrix for `N` sites.
pub fn build_tensor_duality(kind: TensorKind, n_sites: usize) -> Result<DualityMatrix> {
    let (factor, tag) = match kind {
        TensorKind::Coalescing => ([[1.0, 1.0], [1.0, 0.0]], StructureTag::TensorCoalescing),
        TensorKind::Annihilating => ([[1.0, 1.0], [1.0, -1.0]], StructureTag::TensorAnnihilating),
        TensorKind::Q(q) => ([[1.0, 1.0], [1.0, q.to_f64()]], StructureTag::TensorQ(q)),
    };
    DualityMatrix::tensor(factor, n_sites, tag)
}

#[derive(Debug, Clone, Serialize)]
pub struct NondegeneracyReport {
    pub rank: usize,
    pub invertible: bool,
    /// Basis of the right null space when the columns are dependent; a lift
    /// through a non-injective projection shows up here as a difference of
    /// two unit vectors.
    pub right_null_space: Vec<Vec<f64>>,
    pub pivot_tolerance: f64,
}

/// Rank and right null space of a duality matrix by pivoted row reduction.
/// The bilinear form of `H` is non-degenerate iff both null spaces vanish;
/// for square `H` that is invertibility.
pub fn nondegeneracy_check(h: &DualityMatrix) -> NondegeneracyReport {
    let (rank, basis) = h.mat().rank_and_null_space(TOL_PIVOT);
    NondegeneracyReport {
        rank,
        invertible: h.n_rows() == h.n_cols() && rank == h.n_rows(),
        right_null_space: basis,
        pivot_tolerance: TOL_PIVOT,
    }
}
