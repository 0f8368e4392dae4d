//! Dense complex matrix kernel: exponentials, Hermitian spectra, square
//! roots, polar factors and Lyapunov solves.
//!
//! Everything here is generic over [`Real`](crate::Real) and works on small
//! dense matrices (dimension up to a few dozen).

mod eig;
mod expm;
mod functions;
mod lu;
mod matrix;
mod svd;

pub use eig::{hermitian_eig, hermitian_eig_tol, EigenSystem};
pub use expm::{evolution_factor, mat_exp, mat_exp_scaled};
pub use functions::{lyapunov_solve, positive_sqrt};
pub use lu::inverse;
pub use matrix::{vec_norm, ComplexMatrix};
pub use svd::{condition_number, polar_unitary_factor, svd, Svd};
