// SPDX-License-Identifier: Apache-2.0

//! Spectral decompositions: cyclic Jacobi for Hermitian matrices and a
//! two-stage Hermitian-pair method for unitaries.

use num_traits::Zero;

use super::matrix::{ComplexMatrix, Hermitian, Unitary};
use super::MatError;
use crate::scalar::{c, cr, Real, C};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues sorted descending together with the eigenvector frame
/// (columns of `frame` are the eigenvectors).
#[derive(Clone, Debug)]
pub struct Spectrum<T> {
    values: Vec<T>,
    frame: Unitary<T>,
    degeneracy_tol: T,
}

impl<T: Real> Spectrum<T> {
    /// Builds a spectrum from values (any order) and a matching frame. Values
    /// are sorted descending and frame columns permuted accordingly.
    pub fn new(values: Vec<T>, frame: Unitary<T>) -> Result<Self, MatError> {
        let n = values.len();
        if n == 0 {
            return Err(MatError::EmptyDimension);
        }
        if frame.dim() != n {
            return Err(MatError::DimensionMismatch {
                expected: n,
                found: frame.dim(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MatError::NonFinite);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        let sorted: Vec<T> = order.iter().map(|&i| values[i]).collect();
        let permuted = ComplexMatrix::from_fn(n, |i, j| frame[(i, order[j])]);
        let top = sorted[0].abs().max(T::one());
        Ok(Self {
            values: sorted,
            frame: Unitary::new_unchecked(permuted),
            degeneracy_tol: T::lit(1e-9) * top,
        })
    }

    /// Spectrum in its own eigenbasis (identity frame).
    pub fn diagonal(values: Vec<T>) -> Result<Self, MatError> {
        let n = values.len();
        Self::new(values, Unitary::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Descending eigenvalues.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn frame(&self) -> &Unitary<T> {
        &self.frame
    }

    pub fn degeneracy_tol(&self) -> T {
        self.degeneracy_tol
    }

    /// Multiplicity of the largest eigenvalue under the degeneracy tolerance.
    pub fn top_multiplicity(&self) -> usize {
        let top = self.values[0];
        self.values
            .iter()
            .take_while(|&&v| top - v <= self.degeneracy_tol)
            .count()
    }

    /// `λ₁ − λ_{k+1}` with `k` the top multiplicity; zero when the whole
    /// spectrum is degenerate.
    pub fn gap(&self) -> T {
        let k = self.top_multiplicity();
        if k >= self.dim() {
            T::zero()
        } else {
            self.values[0] - self.values[k]
        }
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> Hermitian<T> {
        let n = self.dim();
        let v = self.frame.matrix();
        let m = ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * self.values[k]
            })
        });
        Hermitian::from_hermitian_part(&m)
    }

    /// Shifts every eigenvalue by `shift`, frame unchanged.
    pub fn shifted(&self, shift: T) -> Self {
        let values = self.values.iter().map(|&v| v + shift).collect();
        Self::new(values, self.frame.clone()).expect("shift keeps a valid spectrum")
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh<T: Real>(m: &Hermitian<T>) -> Spectrum<T> {
    let n = m.dim();
    let (values, vectors) = jacobi(m.matrix());
    Spectrum::new(values, Unitary::new_unchecked(vectors)).unwrap_or_else(|_| {
        // n == 0 only
        panic!("eigh on an empty matrix (dim {n})")
    })
}

/// Returns unsorted eigenvalues and eigenvector columns.
fn jacobi<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let n = m.dim();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = cr(a[(i, i)].re);
    }
    let mut v = ComplexMatrix::<T>::identity(n);
    let norm = a.frobenius_norm();
    let tiny = T::min_positive_value();
    let threshold = T::epsilon() * T::lit(0.5) * norm;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= threshold || off <= tiny {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= tiny {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let two = T::lit(2.0);
                let tau = (aqq - app) / (two * b);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let e = apq / b;
                let ebar = e.conj();
                // J = diag(1, ē) R, with R the real Jacobi rotation.
                let jpp = cr(cs);
                let jpq = cr(sn);
                let jqp = ebar * (-sn);
                let jqq = ebar * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Eigenphases and frame of a unitary: `W = V† diag(e^{−iθ_k}) V`, with
/// `θ_k ∈ (−π, π]`.
#[derive(Clone, Debug)]
pub struct UnitaryEigen<T> {
    pub phases: Vec<T>,
    pub frame: Unitary<T>,
}

impl<T: Real> UnitaryEigen<T> {
    /// `V† diag(e^{−iθ}) V`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.phases.len();
        let v = self.frame.matrix();
        let lam: Vec<C<T>> = self
            .phases
            .iter()
            .map(|&t| C::from_polar(T::one(), -t))
            .collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| {
                acc + v[(k, i)].conj() * lam[k] * v[(k, j)]
            })
        })
    }

    /// Eigenvector columns `V†`, i.e. `W = Q diag(e^{−iθ}) Q†`.
    pub fn vectors(&self) -> ComplexMatrix<T> {
        self.frame.adjoint().into_matrix()
    }
}

/// Maps an angle into `(−π, π]`, sending anything within `1e-12` of `±π` to `+π`.
pub fn canonical_phase<T: Real>(theta: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut t = theta % two_pi;
    if t > pi {
        t = t - two_pi;
    } else if t <= -pi {
        t = t + two_pi;
    }
    if (t.abs() - pi).abs() <= T::tol(1e-12) {
        pi
    } else {
        t
    }
}

/// Diagonalizes a unitary through the commuting Hermitian pair
/// `(W + W†)/2` and `(W − W†)/(2i)`: eigh of the first, then the second
/// restricted to each cluster of (near-)equal cosines.
pub fn eig_unitary<T: Real>(w: &Unitary<T>) -> Result<UnitaryEigen<T>, MatError> {
    let n = w.dim();
    if n == 0 {
        return Err(MatError::EmptyDimension);
    }
    let residual = w.unitarity_residual();
    if residual > T::tol(1e-10) {
        return Err(MatError::NotUnitary {
            residual: residual.to_f64_lossy(),
        });
    }
    let wm = w.matrix();
    let cos_part = Hermitian::from_hermitian_part(wm);
    let sin_part = Hermitian::from_hermitian_part(&wm.scale(c(T::zero(), -T::one())));
    let first = eigh(&cos_part);
    let q = first.frame().matrix();
    let cosines = first.values();

    let cluster_tol = T::tol(1e-8);
    let mut vectors = ComplexMatrix::<T>::zeros(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cosines[end - 1] - cosines[end] <= cluster_tol {
            end += 1;
        }
        let size = end - start;
        if size == 1 {
            for i in 0..n {
                vectors[(i, start)] = q[(i, start)];
            }
        } else {
            // Rayleigh-Ritz of the sine part on the cluster's invariant subspace.
            let restricted = project(q, start, size, sin_part.matrix());
            let inner = eigh(&Hermitian::from_hermitian_part(&restricted));
            let y = inner.frame().matrix();
            for i in 0..n {
                for j in 0..size {
                    let mut acc = C::zero();
                    for l in 0..size {
                        acc = acc + q[(i, start + l)] * y[(l, j)];
                    }
                    vectors[(i, start + j)] = acc;
                }
            }
        }
        start = end;
    }

    let wv = wm * &vectors;
    let phases: Vec<T> = (0..n)
        .map(|k| {
            let rq = (0..n).fold(C::<T>::zero(), |acc, i| {
                acc + vectors[(i, k)].conj() * wv[(i, k)]
            });
            canonical_phase(-rq.arg())
        })
        .collect();
    let frame = Unitary::new_unchecked(vectors.adjoint());
    Ok(UnitaryEigen { phases, frame })
}

/// `B† M B` where `B` is columns `start..start + size` of `q`.
fn project<T: Real>(
    q: &ComplexMatrix<T>,
    start: usize,
    size: usize,
    m: &ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    let n = q.dim();
    let mut mb = vec![C::<T>::zero(); n * size];
    for i in 0..n {
        for j in 0..size {
            mb[i * size + j] = (0..n).fold(C::zero(), |acc, k| acc + m[(i, k)] * q[(k, start + j)]);
        }
    }
    ComplexMatrix::from_fn(size, |a, b| {
        (0..n).fold(C::zero(), |acc, i| {
            acc + q[(i, start + a)].conj() * mb[i * size + b]
        })
    })
}

/// Multiplicity of `values[0]` within `tol` (values descending).
pub fn leading_multiplicity<T: Real>(values: &[T], tol: T) -> usize {
    match values.first() {
        None => 0,
        Some(&top) => values.iter().take_while(|&&v| top - v <= tol).count(),
    }
}
