use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

/// Singular value decomposition `A = U Σ V^H`.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    /// Singular values in descending order.
    pub singular_values: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    /// `σ_max / σ_min`; infinite for a singular matrix.
    pub fn condition_number(&self) -> T {
        let max = self.singular_values[0];
        let min = *self.singular_values.last().expect("non-empty");
        if min.is_zero() {
            T::infinity()
        } else {
            max / min
        }
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Column pairs of a working copy of `A` are rotated until mutually
/// orthogonal; the column norms are then the singular values. Works on the
/// matrix itself, never on `A^H A`, so small singular values keep their
/// relative accuracy.
pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<Svd<T>> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    a.check_finite()?;
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();
    let mut converged = false;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = Complex::<T>::zero();
                for k in 0..n {
                    alpha = alpha + w[(k, p)].norm_sqr();
                    beta = beta + w[(k, q)].norm_sqr();
                    gamma = gamma + w[(k, p)].conj() * w[(k, q)];
                }
                let mag = gamma.norm();
                if mag.is_zero() || mag <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let tau = (beta - alpha) / (T::lit(2.0) * mag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let gpq = phase * s;
                let gqp = -(phase.conj() * s);
                for k in 0..n {
                    let wp = w[(k, p)];
                    let wq = w[(k, q)];
                    w[(k, p)] = wp * c + wq * gqp;
                    w[(k, q)] = wp * gpq + wq * c;
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * c + vq * gqp;
                    v[(k, q)] = vp * gpq + vq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "one-sided Jacobi SVD",
            iterations: MAX_SWEEPS,
        });
    }

    let norms: Vec<T> = (0..n)
        .map(|j| (0..n).map(|k| w[(k, j)].norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));
    let singular_values: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let u = ComplexMatrix::from_fn(n, |i, j| {
        let col = order[j];
        if norms[col].is_zero() {
            Complex::zero()
        } else {
            w[(i, col)] / norms[col]
        }
    });
    let v = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Svd {
        u,
        singular_values,
        v,
    })
}

/// Two-norm condition number.
pub fn condition_number<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    Ok(svd(a)?.condition_number())
}

/// Unitary factor `W` of the left polar decomposition `A = S W`, with `S`
/// Hermitian positive definite, computed as `W = U V^H` from the SVD.
pub fn polar_unitary_factor<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let dec = svd(a)?;
    let cond = dec.condition_number();
    if !(cond <= T::cond_threshold()) {
        return Err(Error::IllConditioned {
            cond: cond.to_f64().unwrap_or(f64::INFINITY),
            threshold: T::cond_threshold().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(&dec.u * &dec.v.adjoint())
}
