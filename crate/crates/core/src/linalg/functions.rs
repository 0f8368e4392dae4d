use num_complex::Complex;

use super::{hermitian_eig_tol, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unique Hermitian positive semidefinite square root.
///
/// Eigenvalues in `[-tol·max(1, ρ), 0)` are clamped to zero, where `ρ` is the
/// spectral radius; anything lower is rejected.
pub fn positive_sqrt<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    let es = hermitian_eig_tol(a, T::hermiticity_tol().max(tol))?;
    let radius = es
        .values
        .iter()
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    let floor = tol * T::one().max(radius);
    if let Some(&worst) = es.values.iter().find(|&&v| v < -floor) {
        return Err(Error::NotPositiveSemidefinite {
            eigenvalue: worst.to_f64().unwrap_or(f64::NAN),
            tol: floor.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(es.reconstruct_with(|v| Complex::new(v.max(T::zero()).sqrt(), T::zero())))
}

/// Solves `N X + X N = Q` for Hermitian positive definite `N` in the
/// eigenbasis of `N`: `X̃_ij = Q̃_ij / (λ_i + λ_j)`.
pub fn lyapunov_solve<T: Real>(n: &ComplexMatrix<T>, q: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if n.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: n.dim(),
            found: q.dim(),
        });
    }
    q.check_finite()?;
    let es = hermitian_eig_tol(n, T::hermiticity_tol())?;
    let floor = T::clamp_tol() * T::one().max(es.values.iter().fold(T::zero(), |a, v| a.max(v.abs())));
    let min_sum = es.values[0] + es.values[0];
    if min_sum <= floor {
        return Err(Error::NotPositiveDefinite {
            sum: min_sum.to_f64().unwrap_or(f64::NAN),
            tol: floor.to_f64().unwrap_or(f64::NAN),
        });
    }
    let v = &es.vectors;
    let qt = &(&v.adjoint() * q) * v;
    let xt = ComplexMatrix::from_fn(n.dim(), |i, j| qt[(i, j)] / (es.values[i] + es.values[j]));
    Ok(&(v * &xt) * &v.adjoint())
}
