// SPDX-License-Identifier: Apache-2.0

//! Dense square complex matrices and the Hermitian / unitary newtypes.

use std::fmt;
use std::ops::{Add, Deref, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::MatError;
use crate::scalar::{cr, Real, C};

/// Row-major dense `N x N` complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(entries: Vec<C<T>>) -> Result<Self, MatError> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() {
            return Err(MatError::NotSquare { len: entries.len() });
        }
        let m = Self { dim, data: entries };
        m.check_finite()?;
        Ok(m)
    }

    /// Convenience constructor from real-valued rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatError> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(MatError::NotSquare {
                    len: row.len() * dim,
                });
            }
            data.extend(row.iter().map(|&x| cr(T::lit(x))));
        }
        Self::from_row_major(data)
    }

    pub fn from_diag(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = cr(d);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim)
            .map(|i| self[(i, i)])
            .fold(C::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// `self + factor * other`, in place.
    pub fn axpy(&mut self, factor: C<T>, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + factor * b;
        }
    }

    /// `A B - B A`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        &(a * b) - &(b * a)
    }

    /// `Tr(A† B)`, the Frobenius inner product.
    pub fn inner(a: &Self, b: &Self) -> C<T> {
        a.data
            .iter()
            .zip(&b.data)
            .fold(C::zero(), |acc, (x, y)| acc + x.conj() * *y)
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_of_product(a: &Self, b: &Self) -> C<T> {
        let n = a.dim;
        let mut acc = C::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + a[(i, k)] * b[(k, i)];
            }
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn check_finite(&self) -> Result<(), MatError> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(MatError::NonFinite)
        }
    }

    /// `‖M − M†‖_F`.
    pub fn hermitian_residual(&self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖M + M†‖_F`.
    pub fn anti_hermitian_residual(&self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + (self[(i, j)] + self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖M†M − I‖_F`.
    pub fn unitarity_residual(&self) -> T {
        let g = &self.adjoint() * self;
        (&g - &Self::identity(self.dim)).frobenius_norm()
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// `(M − M†) / 2`.
    pub fn anti_hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] - self[(j, i)].conj()) * half)
    }

    /// Realification: stacks real parts then imaginary parts of the row-major entries.
    pub fn to_real_vec(&self) -> Vec<T> {
        let mut v: Vec<T> = self.data.iter().map(|z| z.re).collect();
        v.extend(self.data.iter().map(|z| z.im));
        v
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| C::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rrow) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&a| -a).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            writeln!(f, "  {:?}", &self.data[i * self.dim..(i + 1) * self.dim])?;
        }
        write!(f, "]")
    }
}

/// Hermitian matrix, validated on construction.
#[derive(Clone, PartialEq)]
pub struct Hermitian<T>(ComplexMatrix<T>);

impl<T: Real> Hermitian<T> {
    /// Accepts `m` when `‖M − M†‖_F ≤ 1e-12 ‖M‖_F`; the stored matrix is the
    /// exactly Hermitian part.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self, MatError> {
        m.check_finite()?;
        let residual = m.hermitian_residual();
        let scale = m.frobenius_norm();
        if residual > T::tol(1e-12) * scale {
            return Err(MatError::NotHermitian {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Symmetrizes without checking; for matrices Hermitian by construction.
    pub fn from_hermitian_part(m: &ComplexMatrix<T>) -> Self {
        Self(m.hermitian_part())
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        Self(ComplexMatrix::from_real_diag(diag))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &[C<T>]) -> Self {
        Self(ComplexMatrix::from_fn(psi.len(), |i, j| {
            psi[i] * psi[j].conj()
        }))
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    /// Real diagonal entries.
    pub fn real_diagonal(&self) -> Vec<T> {
        (0..self.0.dim()).map(|i| self.0[(i, i)].re).collect()
    }
}

impl<T> Deref for Hermitian<T> {
    type Target = ComplexMatrix<T>;
    fn deref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}

/// Unitary matrix, validated on construction.
#[derive(Clone, PartialEq)]
pub struct Unitary<T>(ComplexMatrix<T>);

impl<T: Real> Unitary<T> {
    /// Accepts `m` when `‖M†M − I‖_F ≤ 1e-10`.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self, MatError> {
        m.check_finite()?;
        let residual = m.unitarity_residual();
        if residual > T::tol(1e-10) {
            return Err(MatError::NotUnitary {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(Self(m))
    }

    /// Wraps without checking; for products of exact exponentials and the like.
    pub fn new_unchecked(m: ComplexMatrix<T>) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn from_phases(phases: &[C<T>]) -> Result<Self, MatError> {
        Self::new(ComplexMatrix::from_diag(phases))
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Product of two unitaries (unitary up to rounding).
    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }
}

impl<T> Deref for Unitary<T> {
    type Target = ComplexMatrix<T>;
    fn deref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}

impl<T: fmt::Debug> fmt::Debug for Hermitian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian {:?}", self.0)
    }
}

impl<T: fmt::Debug> fmt::Debug for Unitary<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unitary {:?}", self.0)
    }
}

/// Common Pauli matrices, mostly for tests and examples.
pub mod pauli {
    use super::ComplexMatrix;
    use crate::scalar::{c, Real};
    use num_traits::{One, Zero};

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_row_major(vec![Zero::zero(), One::one(), One::one(), Zero::zero()])
            .unwrap()
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        let i = c(T::zero(), T::one());
        ComplexMatrix::from_row_major(vec![Zero::zero(), -i, i, Zero::zero()]).unwrap()
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_row_major(vec![
            One::one(),
            Zero::zero(),
            Zero::zero(),
            -c(T::one(), T::zero()),
        ])
        .unwrap()
    }
}
