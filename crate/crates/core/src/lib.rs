//! Unitarized quantum time evolution on dense complex matrices.
//!
//! The standard propagator `U(t, t0)` is built by time stepping with exact
//! kick factors. From it the normalization operator `N = (U U^H)^{-1/2}`
//! and the manifestly unitary pitaron `P = N U` follow. Around that core sit
//! perturbative expansions ([`series`]), closed forms for delta-kick
//! dynamics ([`singular`]) and a Picard successive-approximation engine
//! ([`picard`]).
//!
//! The linear-algebra kernel is generic over [`Real`] (`f32` or `f64`); the
//! time-dependent layers use the `f64` aliases below.

// `!(x > y)` comparisons deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod picard;
pub mod propagation;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod singular;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision dense complex matrix.
pub type CMatrix = linalg::ComplexMatrix<f64>;
/// Single-precision dense complex matrix.
pub type CMatrix32 = linalg::ComplexMatrix<f32>;
/// Double-precision Hermitian eigensystem.
pub type EigenSystem64 = linalg::EigenSystem<f64>;
/// Double-precision propagator triple.
pub type Triple = propagation::PropagatorTriple<f64>;
/// Double-precision Hermitian / anti-Hermitian split.
pub type Split = hamiltonian::SplitHamiltonian<f64>;
