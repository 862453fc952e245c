// SPDX-License-Identifier: Apache-2.0

use num_traits::Zero;

use super::eigen::eigh;
use super::matrix::{ComplexMatrix, Hermitian, Unitary};
use super::MatError;
use crate::scalar::{c, Real, C};

/// `exp(Ω)` for anti-Hermitian `Ω`, via the spectral decomposition of the
/// Hermitian generator `H = −iΩ`: `exp(Ω) = Q diag(e^{iλ}) Q†`.
pub fn expm_skew<T: Real>(omega: &ComplexMatrix<T>) -> Result<Unitary<T>, MatError> {
    omega.check_finite()?;
    let residual = omega.anti_hermitian_residual();
    let scale = omega.frobenius_norm();
    if residual > T::tol(1e-10) * scale {
        return Err(MatError::NotAntiHermitian {
            residual: residual.to_f64_lossy(),
        });
    }
    let n = omega.dim();
    if scale.is_zero() {
        return Ok(Unitary::identity(n));
    }
    let generator = Hermitian::from_hermitian_part(&omega.scale(c(T::zero(), -T::one())));
    let spec = eigh(&generator);
    let q = spec.frame().matrix();
    let phases: Vec<C<T>> = spec
        .values()
        .iter()
        .map(|&l| C::from_polar(T::one(), l))
        .collect();
    let out = ComplexMatrix::from_fn(n, |i, j| {
        (0..n).fold(C::zero(), |acc, k| {
            acc + q[(i, k)] * phases[k] * q[(j, k)].conj()
        })
    });
    Ok(Unitary::new_unchecked(out))
}
