// SPDX-License-Identifier: Apache-2.0

//! The `N² × N²` matrix `G_{ij,pq} = ∫₀^T μ_ij(t) μ_pq(t) dt`.

use num_traits::Zero;

use super::system::{heisenberg_dipole, ControlSystem};
use super::DynError;
use crate::matcore::Unitary;
use crate::scalar::{Real, C};

/// Largest dimension for which the `N⁴` storage is allocated.
pub const G_MATRIX_MAX_DIM: usize = 32;

#[derive(Clone, Debug)]
pub struct GMatrix<T> {
    n: usize,
    entries: Vec<C<T>>,
    realified: Vec<T>,
}

impl<T: Real> GMatrix<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `G_{(ij),(pq)}`.
    pub fn get(&self, i: usize, j: usize, p: usize, q: usize) -> C<T> {
        let n2 = self.n * self.n;
        self.entries[(i * self.n + j) * n2 + p * self.n + q]
    }

    /// Row-major `N² × N²` entries.
    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    /// `max |G_{a,b} − G_{b,a}|` over composite indices.
    pub fn symmetry_residual(&self) -> T {
        let n2 = self.n * self.n;
        let mut r = T::zero();
        for a in 0..n2 {
            for b in a + 1..n2 {
                r = r.max((self.entries[a * n2 + b] - self.entries[b * n2 + a]).norm());
            }
        }
        r
    }

    /// Real `2N² × 2N²` Gram matrix `∫ w(t) w(t)ᵀ dt` with
    /// `w = (Re vec μ(t), Im vec μ(t))`, under the same quadrature as `G`.
    pub fn realified(&self) -> &[T] {
        &self.realified
    }

    /// One of the two diagonal blocks of [`realified`](Self::realified):
    /// `∫ Re μ Re μᵀ` (`imaginary = false`) or `∫ Im μ Im μᵀ`.
    pub fn realified_block(&self, imaginary: bool) -> Vec<T> {
        let n2 = self.n * self.n;
        let off = if imaginary { n2 } else { 0 };
        let mut out = Vec::with_capacity(n2 * n2);
        for a in 0..n2 {
            for b in 0..n2 {
                out.push(self.realified[(a + off) * 2 * n2 + b + off]);
            }
        }
        out
    }
}

/// Trapezoidal quadrature of `μ_ij(t_m) μ_pq(t_m)` over the time grid.
pub fn g_matrix<T: Real>(
    system: &ControlSystem<T>,
    grid: &[Unitary<T>],
) -> Result<GMatrix<T>, DynError> {
    let n = system.dim();
    if n > G_MATRIX_MAX_DIM {
        return Err(DynError::GMatrixTooLarge {
            dim: n,
            limit: G_MATRIX_MAX_DIM,
        });
    }
    if grid.len() != system.intervals() + 1 {
        return Err(DynError::DimensionMismatch {
            expected: system.intervals() + 1,
            found: grid.len(),
        });
    }
    let dipoles = heisenberg_dipole(system, grid);
    let dt = system.dt();
    let last = dipoles.len() - 1;
    let n2 = n * n;
    let mut entries = vec![C::<T>::zero(); n2 * n2];
    let mut realified = vec![T::zero(); 4 * n2 * n2];
    for (m, mu) in dipoles.iter().enumerate() {
        let w = if m == 0 || m == last {
            dt * T::lit(0.5)
        } else {
            dt
        };
        let v = mu.as_slice();
        for a in 0..n2 {
            for b in 0..n2 {
                entries[a * n2 + b] = entries[a * n2 + b] + v[a] * v[b] * w;
            }
        }
        let r: Vec<T> = v
            .iter()
            .map(|z| z.re)
            .chain(v.iter().map(|z| z.im))
            .collect();
        for a in 0..2 * n2 {
            for b in 0..2 * n2 {
                realified[a * 2 * n2 + b] = realified[a * 2 * n2 + b] + r[a] * r[b] * w;
            }
        }
    }
    Ok(GMatrix {
        n,
        entries,
        realified,
    })
}
