//! Minimal dense row-major matrix with the factorizations the crate needs:
//! LU solves, pivoted row reduction for rank / null spaces, and a pivoted
//! elimination solver for consistent (possibly overdetermined) systems.
//!
//! Everything is f64, desk scale (n up to a few hundred); no attempt is made
//! at cache blocking or SIMD.

use crate::error::{Error, Result};
use crate::tol::TOL_PIVOT;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension {
                    context: "Mat::from_rows",
                    expected: format!("{c} columns"),
                    got: format!("{} columns in row {i}", row.len()),
                });
            }
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn all_finite(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "matmul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for j in 0..other.cols {
                    dst[j] += a * src[j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        self.rows_iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T * self` for a row-vector view.
    pub fn vecmat(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += vi * a;
            }
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for a in &mut out.data {
            *a *= s;
        }
        out
    }

    /// Largest absolute entry (the max-norm used for residuals throughout).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Solve `self * x = b` by LU with partial pivoting. `b` has one column
    /// per right-hand side.
    pub fn lu_solve(&self, b: &Mat) -> Result<Mat> {
        assert!(self.is_square());
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.clone();
        for k in 0..n {
            let (piv, pval) = (k..n)
                .map(|i| (i, a[(i, k)].abs()))
                .max_by(|u, v| u.1.total_cmp(&v.1))
                .unwrap();
            if pval < 1e-300 {
                return Err(Error::Singular(format!(
                    "zero pivot at elimination step {k}"
                )));
            }
            if piv != k {
                a.swap_rows(piv, k);
                x.swap_rows(piv, k);
            }
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                if f == 0.0 {
                    continue;
                }
                a[(i, k)] = 0.0;
                for j in k + 1..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
                for j in 0..x.cols {
                    x[(i, j)] -= f * x[(k, j)];
                }
            }
        }
        for k in (0..n).rev() {
            for j in 0..x.cols {
                let mut s = x[(k, j)];
                for m in k + 1..n {
                    s -= a[(k, m)] * x[(m, j)];
                }
                x[(k, j)] = s / a[(k, k)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat> {
        self.lu_solve(&Mat::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank and right null-space basis by row reduction with partial
    /// pivoting; pivots below `tol` count as zero.
    pub fn rank_and_null_space(&self, tol: f64) -> (usize, Vec<Vec<f64>>) {
        let mut a = self.clone();
        let (m, n) = (self.rows, self.cols);
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for j in 0..n {
            if r == m {
                break;
            }
            let (piv, pval) = (r..m)
                .map(|i| (i, a[(i, j)].abs()))
                .max_by(|u, v| u.1.total_cmp(&v.1))
                .unwrap();
            if pval <= tol {
                continue;
            }
            a.swap_rows(piv, r);
            let p = a[(r, j)];
            for jj in 0..n {
                a[(r, jj)] /= p;
            }
            for i in 0..m {
                if i == r {
                    continue;
                }
                let f = a[(i, j)];
                if f == 0.0 {
                    continue;
                }
                for jj in 0..n {
                    a[(i, jj)] -= f * a[(r, jj)];
                }
            }
            pivot_cols.push(j);
            r += 1;
        }
        let free_cols: Vec<usize> = (0..n).filter(|j| !pivot_cols.contains(j)).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut v = vec![0.0; n];
            v[f] = 1.0;
            for (row, &p) in pivot_cols.iter().enumerate() {
                v[p] = -a[(row, f)];
            }
            basis.push(v);
        }
        (r, basis)
    }

    /// Solve the (possibly overdetermined) system `self * x = b`, which the
    /// caller asserts to be consistent. Plain pivoted elimination, no square
    /// roots, so dyadic-rational data yields exact dyadic solutions. Returns
    /// the solution and the worst residual over redundant rows; free
    /// variables are set to zero.
    ///
    /// `reverse_order` flips the column elimination order, used to check that
    /// results do not depend on pivot choices.
    pub fn solve_consistent(&self, b: &Mat, reverse_order: bool) -> Result<(Mat, f64)> {
        assert_eq!(self.rows, b.rows);
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut rhs = b.clone();
        let col_order: Vec<usize> = if reverse_order {
            (0..n).rev().collect()
        } else {
            (0..n).collect()
        };
        let scale = self.max_abs().max(1.0);
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut r = 0;
        for &j in &col_order {
            if r == m {
                break;
            }
            let (piv, pval) = (r..m)
                .map(|i| (i, a[(i, j)].abs()))
                .max_by(|u, v| u.1.total_cmp(&v.1))
                .unwrap();
            if pval <= TOL_PIVOT * scale {
                continue;
            }
            a.swap_rows(piv, r);
            rhs.swap_rows(piv, r);
            for i in 0..m {
                if i == r {
                    continue;
                }
                let f = a[(i, j)] / a[(r, j)];
                if f == 0.0 {
                    continue;
                }
                for jj in 0..n {
                    a[(i, jj)] -= f * a[(r, jj)];
                }
                a[(i, j)] = 0.0;
                for jj in 0..rhs.cols {
                    rhs[(i, jj)] -= f * rhs[(r, jj)];
                }
            }
            pivots.push((r, j));
            r += 1;
        }
        let mut x = Mat::zeros(n, b.cols);
        for &(row, col) in &pivots {
            for j in 0..b.cols {
                x[(col, j)] = rhs[(row, j)] / a[(row, col)];
            }
        }
        // Residual over the rows left without a pivot: nonzero means the
        // system was not actually consistent.
        let mut worst = 0.0f64;
        for i in r..m {
            for j in 0..rhs.cols {
                worst = worst.max(rhs[(i, j)].abs());
            }
        }
        Ok((x, worst))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn max_abs_vec(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(x.abs()))
}
