use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_TERMS: usize = 40;

/// Matrix exponential by scaling and squaring around a truncated Taylor core.
///
/// The argument is scaled by `2^-s` until its one-norm is at most 1/2, the
/// series is summed until the next term drops below machine epsilon relative
/// to the partial sum, and the result is squared `s` times.
pub fn mat_exp<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    a.check_finite()?;
    if n == 1 {
        return Ok(ComplexMatrix::from_diag(&[a[(0, 0)].exp()]));
    }

    let norm = a.norm_one();
    let half = T::lit(0.5);
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > half {
        scaled_norm = scaled_norm * half;
        squarings += 1;
    }
    let scale = T::lit(0.5).powi(squarings as i32);
    let x = a.scale_real(scale);

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &x).scale_real(T::one() / T::from_usize(k).expect("small integer"));
        sum += &term;
        if term.norm_one() <= T::epsilon() * sum.norm_one() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Exponential of `scale·A` for a complex scalar `scale`.
pub fn mat_exp_scaled<T: Real>(a: &ComplexMatrix<T>, scale: Complex<T>) -> Result<ComplexMatrix<T>> {
    mat_exp(&a.scale(scale))
}

/// `exp(-i·dt·H)`.
pub fn evolution_factor<T: Real>(h: &ComplexMatrix<T>, dt: T) -> Result<ComplexMatrix<T>> {
    mat_exp_scaled(h, Complex::new(T::zero(), -dt))
}
