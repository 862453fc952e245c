// SPDX-License-Identifier: Apache-2.0

//! QR (Gram-Schmidt with reorthogonalization) and LU-based inversion.

use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use super::MatError;
use crate::scalar::{cr, Real, C};

/// `A = Q R` with unitary `Q` and upper-triangular `R` whose diagonal is real
/// and nonnegative.
#[derive(Clone, Debug)]
pub struct Qr<T> {
    pub q: ComplexMatrix<T>,
    pub r: ComplexMatrix<T>,
}

/// Column-wise modified Gram-Schmidt, run twice per column. The positive real
/// diagonal of `R` is what makes `Q` Haar-distributed for Gaussian input.
pub fn qr<T: Real>(a: &ComplexMatrix<T>) -> Result<Qr<T>, MatError> {
    let n = a.dim();
    let mut q = ComplexMatrix::<T>::zeros(n);
    let mut r = ComplexMatrix::<T>::zeros(n);
    let mut col = vec![C::<T>::zero(); n];
    for j in 0..n {
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = a[(i, j)];
        }
        for _pass in 0..2 {
            for k in 0..j {
                let proj = (0..n).fold(C::zero(), |acc, i| acc + q[(i, k)].conj() * col[i]);
                r[(k, j)] = r[(k, j)] + proj;
                for (i, slot) in col.iter_mut().enumerate() {
                    *slot = *slot - q[(i, k)] * proj;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::epsilon() * a.frobenius_norm() {
            return Err(MatError::Singular);
        }
        r[(j, j)] = cr(norm);
        for (i, z) in col.iter().enumerate() {
            q[(i, j)] = *z / norm;
        }
    }
    Ok(Qr { q, r })
}

/// Inverse by Gaussian elimination with partial pivoting.
pub fn inverse<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, MatError> {
    let n = a.dim();
    let mut lu = a.clone();
    let mut inv = ComplexMatrix::<T>::identity(n);
    let scale = a.max_abs();
    if scale.is_zero() {
        return Err(MatError::Singular);
    }
    for col in 0..n {
        let (pivot_row, pivot_abs) =
            (col..n)
                .map(|r| (r, lu[(r, col)].norm()))
                .fold(
                    (col, T::zero()),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs <= T::epsilon() * scale {
            return Err(MatError::Singular);
        }
        if pivot_row != col {
            for k in 0..n {
                let tmp = lu[(col, k)];
                lu[(col, k)] = lu[(pivot_row, k)];
                lu[(pivot_row, k)] = tmp;
                let tmp = inv[(col, k)];
                inv[(col, k)] = inv[(pivot_row, k)];
                inv[(pivot_row, k)] = tmp;
            }
        }
        let pivot_inv = C::<T>::one() / lu[(col, col)];
        for k in 0..n {
            lu[(col, k)] = lu[(col, k)] * pivot_inv;
            inv[(col, k)] = inv[(col, k)] * pivot_inv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = lu[(r, col)];
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                lu[(r, k)] = lu[(r, k)] - f * lu[(col, k)];
                inv[(r, k)] = inv[(r, k)] - f * inv[(col, k)];
            }
        }
    }
    Ok(inv)
}
