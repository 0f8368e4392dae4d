use num_complex::Complex;
use num_traits::{One, Zero};

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Inverse by Gaussian elimination with partial pivoting.
///
/// Only exact singularity is detected here; callers that care about
/// conditioning check it separately.
pub fn inverse<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    a.check_finite()?;
    let mut m = a.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().partial_cmp(&m[(j, col)].norm()).expect("finite"))
            .expect("non-empty range");
        if m[(pivot, col)].is_zero() {
            return Err(Error::Singular);
        }
        if pivot != col {
            for k in 0..n {
                let tmp = m[(col, k)];
                m[(col, k)] = m[(pivot, k)];
                m[(pivot, k)] = tmp;
                let tmp = inv[(col, k)];
                inv[(col, k)] = inv[(pivot, k)];
                inv[(pivot, k)] = tmp;
            }
        }
        let p: Complex<T> = Complex::<T>::one() / m[(col, col)];
        for k in 0..n {
            m[(col, k)] = m[(col, k)] * p;
            inv[(col, k)] = inv[(col, k)] * p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = m[(row, col)];
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                let mk = m[(col, k)];
                let ik = inv[(col, k)];
                m[(row, k)] = m[(row, k)] - f * mk;
                inv[(row, k)] = inv[(row, k)] - f * ik;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn inverts_and_detects_singular() {
        let a = M::from_rows(&[
            vec![Complex::new(0.0, 0.0), Complex::new(2.0, 1.0)],
            vec![Complex::new(1.0, 0.0), Complex::new(3.0, -1.0)],
        ])
        .unwrap();
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).approx_eq(&M::identity(2), 1e-14));
        let s = M::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(inverse(&s), Err(Error::Singular));
    }
}
