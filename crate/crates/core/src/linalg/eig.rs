use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenSystem<T> {
    /// `V f(diag(values)) V^H`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mapped: Vec<Complex<T>> = self.values.iter().map(|&v| f(v)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| acc + v[(i, k)] * mapped[k] * v[(j, k)].conj())
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|v| Complex::new(v, T::zero()))
    }
}

fn check_hermitian<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<()> {
    if a.dim() == 0 {
        return Err(Error::EmptyDimension);
    }
    a.check_finite()?;
    let defect = a.hermiticity_defect();
    let scale = T::one().max(a.frobenius_norm());
    if defect > tol * scale {
        return Err(Error::NotHermitian {
            defect: defect.to_f64().unwrap_or(f64::NAN),
            tol: (tol * scale).to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix with the default tolerance.
pub fn hermitian_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenSystem<T>> {
    hermitian_eig_tol(a, T::hermiticity_tol())
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input is symmetrized before rotating, so the check
/// `‖A − A^H‖ ≤ tol·max(1, ‖A‖)` is the only Hermiticity requirement.
pub fn hermitian_eig_tol<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<EigenSystem<T>> {
    check_hermitian(a, tol)?;
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();
    let total = m.frobenius_norm();
    if total.is_zero() {
        return Ok(EigenSystem {
            values: vec![T::zero(); n],
            vectors: v,
        });
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if mag <= eps * eps * total || mag <= eps * T::lit(0.01) * (app.abs() + aqq.abs()) {
                    m[(p, q)] = Complex::zero();
                    m[(q, p)] = Complex::zero();
                    continue;
                }
                let phase = apq / mag;
                let tau = (aqq - app) / (T::lit(2.0) * mag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // G = [[c, s·phase], [−s·conj(phase), c]] on (p, q).
                let gpq = phase * s;
                let gqp = -(phase.conj() * s);
                // M ← M G
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * gqp;
                    m[(k, q)] = mkp * gpq + mkq * c;
                }
                // M ← G^H M
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * gqp.conj();
                    m[(q, k)] = mpk * gpq.conj() + mqk * c;
                }
                m[(p, q)] = Complex::zero();
                m[(q, p)] = Complex::zero();
                m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
                m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi eigensolver",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}
