//! The symmetric simple exclusion process on a path of `M` sites, its subset
//! self-duality, and the birth-kernel symmetry.
//!
//! A particle hops to an unoccupied nearest neighbour at rate 1, so the
//! generator swaps discordant neighbouring coordinates. The chain is
//! self-dual with `H(A, B) = 1{A subset of B}`; the product-Bernoulli(1/2)
//! reversible measure turns `H` into the stochastic kernel
//! `Lambda = tensor of [[1/2, 1/2], [0, 1]]` ("at each unoccupied site a
//! particle is born with probability 1/2"), and `Lambda` commutes with the
//! generator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::mat::Mat;
use crate::linalg::{DualityMatrix, GeneratorMatrix, StochasticMatrix, StructureTag};

pub const MAX_SEP_SITES: usize = 10;

#[derive(Debug, Clone)]
pub struct SepInstance {
    pub generator: GeneratorMatrix,
    /// Subset duality function `H(A, B) = 1{A subset of B}`.
    pub h_subset: DualityMatrix,
    /// Birth kernel commuting with the generator.
    pub lambda_kernel: StochasticMatrix,
}

/// Build the SEP generator, subset duality and birth kernel on `M` sites.
pub fn sep_instance(m: usize) -> Result<SepInstance> {
    if !(2..=MAX_SEP_SITES).contains(&m) {
        return Err(Error::TooManySites(m, MAX_SEP_SITES));
    }
    let size = 1usize << m;
    let mut gen = Mat::zeros(size, size);
    for state in 0..size {
        let mut out_rate = 0.0;
        for k in 0..m - 1 {
            let b1 = (state >> (m - 1 - k)) & 1;
            let b2 = (state >> (m - 2 - k)) & 1;
            if b1 != b2 {
                let swapped = state ^ (1 << (m - 1 - k)) ^ (1 << (m - 2 - k));
                gen[(state, swapped)] += 1.0;
                out_rate += 1.0;
            }
        }
        gen[(state, state)] = -out_rate;
    }
    let generator = GeneratorMatrix::new(gen)?;
    let h_subset = DualityMatrix::tensor([[1.0, 1.0], [0.0, 1.0]], m, StructureTag::Generic)?;
    let lambda = DualityMatrix::tensor([[0.5, 0.5], [0.0, 1.0]], m, StructureTag::Generic)?;
    let lambda_kernel = StochasticMatrix::new(lambda.into_mat())?;
    Ok(SepInstance {
        generator,
        h_subset,
        lambda_kernel,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SepReport {
    pub sites: usize,
    /// `|L Lambda - Lambda L|_inf`
    pub commutator_residual: f64,
    /// `|L H - H L^T|_inf`
    pub duality_residual: f64,
}

/// Verify the SEP symmetry and self-duality residuals at `M` sites.
pub fn sep_symmetry_check(m: usize) -> Result<SepReport> {
    let inst = sep_instance(m)?;
    let l = inst.generator.mat();
    let lam = inst.lambda_kernel.mat();
    let commutator_residual = l.matmul(lam).max_abs_diff(&lam.matmul(l));
    let h = inst.h_subset.mat();
    let duality_residual = l.matmul(h).max_abs_diff(&h.matmul(&l.transpose()));
    Ok(SepReport {
        sites: m,
        commutator_residual,
        duality_residual,
    })
}
