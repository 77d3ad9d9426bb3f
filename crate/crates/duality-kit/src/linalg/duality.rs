//! The duality function `H` as a dense `|E| x |F|` matrix, with
//! tensor-structured builders for spin systems.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::mat::Mat;
use crate::pathsim::qvalue::QParameter;

/// How a duality matrix was built. Tensor-tagged matrices are bit-exact
/// reproducible from their 2x2 factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StructureTag {
    TensorCoalescing,
    TensorAnnihilating,
    TensorQ(QParameter),
    Siegmund,
    Diagonal,
    Generic,
}

/// Duality function on `E x F` in matrix form: `H(x, y)` with `x` a row
/// index and `y` a column index.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityMatrix {
    mat: Mat,
    tag: StructureTag,
}

/// Dense cap for the tensor builders (2^N states).
pub const MAX_TENSOR_SITES: usize = 20;

impl DualityMatrix {
    pub fn new(mat: Mat) -> Result<Self> {
        mat.all_finite()?;
        Ok(DualityMatrix {
            mat,
            tag: StructureTag::Generic,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        DualityMatrix::new(Mat::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        DualityMatrix {
            mat: Mat::identity(n),
            tag: StructureTag::Generic,
        }
    }

    /// Diagonal H from its diagonal entries.
    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Mat::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        DualityMatrix {
            mat: m,
            tag: StructureTag::Diagonal,
        }
    }

    /// `H(x, y) = 1{x >= y}` on `{0, .., n-1}` with the index order.
    pub fn siegmund_indicator(n: usize) -> Self {
        DualityMatrix {
            mat: Mat::from_fn(n, n, |x, y| if x >= y { 1.0 } else { 0.0 }),
            tag: StructureTag::Siegmund,
        }
    }

    /// Tensor power `H = h^{tensor N}` of a 2x2 factor over the site set.
    /// Entry `(x, y)` is the product over sites of `h[x_i][y_i]`, multiplied
    /// in site order (site 0 first), which pins the floating-point result.
    pub fn tensor(factor: [[f64; 2]; 2], n_sites: usize, tag: StructureTag) -> Result<Self> {
        if n_sites > MAX_TENSOR_SITES {
            return Err(Error::TooManySites(n_sites, MAX_TENSOR_SITES));
        }
        let size = 1usize << n_sites;
        let mat = Mat::from_fn(size, size, |x, y| {
            let mut v = 1.0;
            for i in 0..n_sites {
                let xb = (x >> (n_sites - 1 - i)) & 1;
                let yb = (y >> (n_sites - 1 - i)) & 1;
                v *= factor[xb][yb];
            }
            v
        });
        Ok(DualityMatrix { mat, tag })
    }

    pub fn tag(&self) -> &StructureTag {
        &self.tag
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    pub fn n_rows(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.mat.n_cols()
    }

    pub fn is_diagonal(&self) -> std::result::Result<(), (usize, usize)> {
        for i in 0..self.mat.n_rows() {
            for j in 0..self.mat.n_cols() {
                if i != j && self.mat[(i, j)] != 0.0 {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }
}
