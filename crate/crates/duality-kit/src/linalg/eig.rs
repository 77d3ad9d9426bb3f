//! Eigenvalues of dense real nonsymmetric matrices.
//!
//! Householder reduction to upper Hessenberg form followed by the implicit
//! double-shift QR iteration with two-root deflation, in the lineage of the
//! Algol `orthes`/`hqr` procedures (Handbook for Automatic Computation,
//! vol. II) and their EISPACK/JAMA descendants. Eigenvalues only; no Schur
//! vectors are accumulated.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::mat::Mat;

/// One complex eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn dist(&self, other: &Eigenvalue) -> f64 {
        ((self.re - other.re).powi(2) + (self.im - other.im).powi(2)).sqrt()
    }

    pub fn modulus(&self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

const MAX_ITERS_PER_ROOT: usize = 50;

/// All eigenvalues with algebraic multiplicity, sorted lexicographically by
/// `(re, im)`.
pub fn eigenvalues(m: &Mat) -> Result<Vec<Eigenvalue>> {
    if !m.is_square() {
        return Err(Error::Dimension {
            context: "eigenvalues",
            expected: "square matrix".into(),
            got: format!("{}x{}", m.n_rows(), m.n_cols()),
        });
    }
    m.all_finite()?;
    let n = m.n_rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    let mut eigs = hqr(&mut h)?;
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eigs)
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(h: &mut Mat) {
    let n = h.n_rows();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        // Similarity transform H <- (I - u u^T / hh) H (I - u u^T / hh).
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
        for i in m + 1..=high {
            h[(i, m - 1)] = 0.0;
        }
    }
}

#[inline]
fn sign_of(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Double-shift QR on an upper Hessenberg matrix, destroying it.
fn hqr(a: &mut Mat) -> Result<Vec<Eigenvalue>> {
    let n = a.n_rows();
    let eps = f64::EPSILON;
    let mut eig = vec![Eigenvalue { re: 0.0, im: 0.0 }; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut exshift = 0.0;
    let mut its = 0usize;
    while nn >= 0 {
        // Find l such that the subdiagonal entry a[l][l-1] is negligible.
        let mut l = nn;
        while l >= 1 {
            let mut s = a[((l - 1) as usize, (l - 1) as usize)].abs()
                + a[(l as usize, l as usize)].abs();
            if s == 0.0 {
                s = anorm;
            }
            if a[(l as usize, (l - 1) as usize)].abs() <= eps * s {
                a[(l as usize, (l - 1) as usize)] = 0.0;
                break;
            }
            l -= 1;
        }

        let x = a[(nn as usize, nn as usize)];
        if l == nn {
            // One root.
            eig[nn as usize] = Eigenvalue {
                re: x + exshift,
                im: 0.0,
            };
            nn -= 1;
            its = 0;
            continue;
        }

        let y = a[((nn - 1) as usize, (nn - 1) as usize)];
        let w = a[(nn as usize, (nn - 1) as usize)] * a[((nn - 1) as usize, nn as usize)];
        if l == nn - 1 {
            // Two roots from the trailing 2x2 block.
            let p = 0.5 * (y - x);
            let q = p * p + w;
            let z = q.abs().sqrt();
            let xs = x + exshift;
            if q >= 0.0 {
                let z = p + sign_of(z, p);
                let r1 = xs + z;
                let r2 = if z != 0.0 { xs - w / z } else { r1 };
                eig[(nn - 1) as usize] = Eigenvalue { re: r1, im: 0.0 };
                eig[nn as usize] = Eigenvalue { re: r2, im: 0.0 };
            } else {
                eig[(nn - 1) as usize] = Eigenvalue { re: xs + p, im: z };
                eig[nn as usize] = Eigenvalue { re: xs + p, im: -z };
            }
            nn -= 2;
            its = 0;
            continue;
        }

        // No convergence yet; run one double-shift sweep.
        if its == MAX_ITERS_PER_ROOT {
            return Err(Error::EigenNoConvergence {
                index: nn as usize,
                iterations: its,
            });
        }
        let (mut x, mut y, mut w) = (x, y, w);
        if its == 10 || its == 20 {
            // Exceptional shift.
            exshift += x;
            for i in l..=nn {
                let d = a[(i as usize, i as usize)] - x;
                a[(i as usize, i as usize)] = d;
            }
            let s = a[(nn as usize, (nn - 1) as usize)].abs()
                + a[((nn - 1) as usize, (nn - 2) as usize)].abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        its += 1;

        // Look for two consecutive small subdiagonal elements.
        let mut m = nn - 2;
        let (mut p, mut q, mut r);
        loop {
            let z = a[(m as usize, m as usize)];
            let rr = x - z;
            let ss = y - z;
            p = (rr * ss - w) / a[((m + 1) as usize, m as usize)] + a[(m as usize, (m + 1) as usize)];
            q = a[((m + 1) as usize, (m + 1) as usize)] - z - rr - ss;
            r = a[((m + 2) as usize, (m + 1) as usize)];
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = a[(m as usize, (m - 1) as usize)].abs() * (q.abs() + r.abs());
            let v = p.abs()
                * (a[((m - 1) as usize, (m - 1) as usize)].abs()
                    + z.abs()
                    + a[((m + 1) as usize, (m + 1) as usize)].abs());
            if u <= eps * v {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=nn {
            a[(i as usize, (i - 2) as usize)] = 0.0;
            if i != m + 2 {
                a[(i as usize, (i - 3) as usize)] = 0.0;
            }
        }

        // Double QR sweep over rows m..nn.
        for k in m..nn {
            let notlast = k != nn - 1;
            let mut x_loc = 0.0;
            if k != m {
                p = a[(k as usize, (k - 1) as usize)];
                q = a[((k + 1) as usize, (k - 1) as usize)];
                r = if notlast {
                    a[((k + 2) as usize, (k - 1) as usize)]
                } else {
                    0.0
                };
                x_loc = p.abs() + q.abs() + r.abs();
                if x_loc == 0.0 {
                    continue;
                }
                p /= x_loc;
                q /= x_loc;
                r /= x_loc;
            }
            let s = sign_of((p * p + q * q + r * r).sqrt(), p);
            if s == 0.0 {
                continue;
            }
            if k == m {
                if l != m {
                    a[(k as usize, (k - 1) as usize)] = -a[(k as usize, (k - 1) as usize)];
                }
            } else {
                a[(k as usize, (k - 1) as usize)] = -s * x_loc;
            }
            p += s;
            let px = p / s;
            let py = q / s;
            let pz = r / s;
            q /= p;
            r /= p;

            // Row modification.
            for j in k as usize..n {
                let mut pp = a[(k as usize, j)] + q * a[((k + 1) as usize, j)];
                if notlast {
                    pp += r * a[((k + 2) as usize, j)];
                    a[((k + 2) as usize, j)] -= pp * pz;
                }
                a[((k + 1) as usize, j)] -= pp * py;
                a[(k as usize, j)] -= pp * px;
            }
            // Column modification.
            let mmin = nn.min(k + 3) as usize;
            for i in l as usize..=mmin {
                let mut pp = px * a[(i, k as usize)] + py * a[(i, (k + 1) as usize)];
                if notlast {
                    pp += pz * a[(i, (k + 2) as usize)];
                    a[(i, (k + 2) as usize)] -= pp * r;
                }
                a[(i, (k + 1) as usize)] -= pp * q;
                a[(i, k as usize)] -= pp;
            }
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_multiset_close(got: &[Eigenvalue], want: &[(f64, f64)], tol: f64) {
        assert_eq!(got.len(), want.len());
        let mut want: Vec<(f64, f64)> = want.to_vec();
        want.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g.re - w.0).abs() < tol && (g.im - w.1).abs() < tol,
                "got {:?}, want {:?}",
                g,
                w
            );
        }
    }

    #[test]
    fn identity_has_eigenvalue_one_with_multiplicity_n() {
        let e = eigenvalues(&Mat::identity(5)).unwrap();
        assert_multiset_close(&e, &[(1.0, 0.0); 5], 1e-12);
    }

    #[test]
    fn swap_matrix_has_plus_minus_one() {
        let m = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eigenvalues(&m).unwrap();
        assert_multiset_close(&e, &[(-1.0, 0.0), (1.0, 0.0)], 1e-12);
    }

    #[test]
    fn rotation_block_has_complex_pair() {
        // [[cos, -sin], [sin, cos]] has eigenvalues cos +/- i sin.
        let (c, s) = (0.6, 0.8);
        let m = Mat::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
        let e = eigenvalues(&m).unwrap();
        assert_multiset_close(&e, &[(c, -s), (c, s)], 1e-12);
    }

    #[test]
    fn upper_triangular_eigenvalues_are_the_diagonal() {
        let m = Mat::from_rows(&[
            vec![3.0, 1.0, 2.0, -1.0],
            vec![0.0, -2.0, 4.0, 0.5],
            vec![0.0, 0.0, 0.5, 7.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let e = eigenvalues(&m).unwrap();
        assert_multiset_close(&e, &[(3.0, 0.0), (-2.0, 0.0), (0.5, 0.0), (1.0, 0.0)], 1e-9);
    }

    #[test]
    fn companion_matrix_roots() {
        // Companion of x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3).
        let m = Mat::from_rows(&[
            vec![6.0, -11.0, 6.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        let e = eigenvalues(&m).unwrap();
        assert_multiset_close(&e, &[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], 1e-9);
    }

    #[test]
    fn cyclic_shift_has_roots_of_unity() {
        // The 5-state cyclic permutation: eigenvalues are the 5th roots of
        // unity, a closed-form oracle with complex pairs.
        let n = 5;
        let m = Mat::from_fn(n, n, |i, j| if j == (i + 1) % n { 1.0 } else { 0.0 });
        let eigs = eigenvalues(&m).unwrap();
        let mut want: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / n as f64;
                (theta.cos(), theta.sin())
            })
            .collect();
        want.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        for (got, w) in eigs.iter().zip(&want) {
            assert!(
                (got.re - w.0).abs() < 1e-10 && (got.im - w.1).abs() < 1e-10,
                "{got:?} vs {w:?}"
            );
        }
    }

    #[test]
    fn defective_jordan_block_eigenvalues() {
        let m = Mat::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let e = eigenvalues(&m).unwrap();
        assert_multiset_close(&e, &[(1.0, 0.0), (1.0, 0.0)], 1e-7);
    }

    #[test]
    fn hundred_state_stochastic_matrix_converges() {
        let mut state = 777u64;
        let mut next = || {
            state = crate::rng::splitmix64(state);
            0.01 + (state >> 11) as f64 / 9007199254740992.0
        };
        let n = 100;
        let raw = Mat::from_fn(n, n, |_, _| next());
        let m = Mat::from_fn(n, n, |i, j| {
            raw[(i, j)] / raw.row(i).iter().sum::<f64>()
        });
        let eigs = eigenvalues(&m).unwrap();
        assert_eq!(eigs.len(), n);
        assert!(eigs.iter().any(|e| (e.re - 1.0).abs() < 1e-8 && e.im.abs() < 1e-8));
        assert!(eigs.iter().all(|e| e.modulus() <= 1.0 + 1e-8));
    }

    #[test]
    fn similarity_preserves_spectrum_on_random_instance() {
        // Fixed pseudo-random 6x6 and an invertible transform of it.
        let mut state = 12345u64;
        let mut next = || {
            state = crate::rng::splitmix64(state);
            (state >> 11) as f64 / 9007199254740992.0 - 0.5
        };
        let a = Mat::from_fn(6, 6, |_, _| next());
        let mut t = Mat::identity(6);
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    t[(i, j)] = 0.3 * next();
                }
            }
        }
        let b = t.lu_solve(&a.matmul(&t)).unwrap(); // T^{-1} A T
        let ea = eigenvalues(&a).unwrap();
        let eb = eigenvalues(&b).unwrap();
        for (x, y) in ea.iter().zip(&eb) {
            assert!(x.dist(y) < 1e-8, "{x:?} vs {y:?}");
        }
    }
}
