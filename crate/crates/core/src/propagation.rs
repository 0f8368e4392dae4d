//! Propagators, normalization operators and pitarons.
//!
//! `U(t, t0)` is a time-ordered product of short-time exponentials sampled at
//! substep midpoints, with each kick `V_i δ(t − t_i)` inserted as the exact
//! factor `exp(−i V_i)`. A kick belongs to every interval with
//! `t_i ∈ (t0, t]`. `N` is always recomputed from `U` as
//! `√(U^{-H} U^{-1})`; it is never integrated from an evolution law.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, SmoothPart, SplitHamiltonian};
use crate::linalg::{
    condition_number, evolution_factor, inverse, lyapunov_solve, mat_exp_scaled, positive_sqrt, vec_norm,
    ComplexMatrix,
};
use crate::quadrature::linspace;
use crate::scalar::Real;
use crate::{CMatrix, C64};

/// `{U, N, P}` on one interval plus unitarity diagnostics.
#[derive(Debug, Clone)]
pub struct PropagatorTriple<T> {
    pub t0: f64,
    pub t: f64,
    pub u: ComplexMatrix<T>,
    pub n: ComplexMatrix<T>,
    pub p: ComplexMatrix<T>,
    /// `‖U^H U − I‖_F`.
    pub defect_u: T,
    /// `‖P^H P − I‖_F`.
    pub defect_p: T,
    pub cond_u: T,
}

impl<T: Real> PropagatorTriple<T> {
    pub fn with_interval(mut self, t0: f64, t: f64) -> Self {
        self.t0 = t0;
        self.t = t;
        self
    }

    /// `‖N − I‖_F`.
    pub fn n_distance(&self) -> T {
        self.n.distance(&ComplexMatrix::identity(self.n.dim()))
    }
}

fn check_conditioning<T: Real>(u: &ComplexMatrix<T>) -> Result<T> {
    let cond = condition_number(u)?;
    if !(cond <= T::cond_threshold()) {
        return Err(Error::IllConditioned {
            cond: cond.to_f64().unwrap_or(f64::INFINITY),
            threshold: T::cond_threshold().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(cond)
}

fn normalization_unchecked<T: Real>(u: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let u_inv = inverse(u)?;
    let gram = (&u_inv.adjoint() * &u_inv).hermitian_part();
    positive_sqrt(&gram, T::clamp_tol())
}

/// `N = √(U^{-H} U^{-1})`, Hermitian positive definite.
pub fn normalization_operator<T: Real>(u: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    check_conditioning(u)?;
    normalization_unchecked(u)
}

/// `P = N U` together with `U`, `N` and the diagnostics.
pub fn pitaron<T: Real>(u: &ComplexMatrix<T>) -> Result<PropagatorTriple<T>> {
    let cond_u = check_conditioning(u)?;
    let n = normalization_unchecked(u)?;
    let p = &n * u;
    Ok(PropagatorTriple {
        t0: 0.0,
        t: 0.0,
        defect_u: u.unitarity_defect(),
        defect_p: p.unitarity_defect(),
        cond_u,
        u: u.clone(),
        n,
        p,
    })
}

/// `‖U ψ‖ / ‖ψ‖`.
pub fn z_factor<T: Real>(u: &ComplexMatrix<T>, psi: &[Complex<T>]) -> Result<T> {
    if psi.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: psi.len(),
        });
    }
    let norm = vec_norm(psi);
    if norm.is_zero() || !norm.is_finite() {
        return Err(Error::InvalidArgument("reference state must be a finite non-zero vector".into()));
    }
    Ok(vec_norm(&u.mul_vec(psi)) / norm)
}

/// `dN/dt = −i[H, N]` for a Hermitian Hamiltonian.
pub fn liouville_rhs<T: Real>(h: &ComplexMatrix<T>, n: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    h.commutator(n).scale(Complex::new(T::zero(), -T::one()))
}

/// `dN/dt = −i[𝓗, N] + N 𝒥`.
pub fn general_n_rhs<T: Real>(split: &SplitHamiltonian<T>, n: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    &liouville_rhs(&split.h_part, n) + &(n * &split.j_part)
}

/// Solves `N X + X N = −(U^{-H} dU^H N² + N² dU U^{-1})` for `X = dN/dt`.
pub fn lyapunov_n_rhs<T: Real>(
    u: &ComplexMatrix<T>,
    du: &ComplexMatrix<T>,
    n: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    check_conditioning(u)?;
    let u_inv = inverse(u)?;
    let n2 = n * n;
    let left = &(&u_inv.adjoint() * &du.adjoint()) * &n2;
    let right = &(&n2 * du) * &u_inv;
    let q = -(&left + &right);
    lyapunov_solve(n, &q)
}

/// Cut points of `[t0, t]`: uniform substeps refined at breakpoints and
/// kick times.
fn cut_points(spec: &HamiltonianSpec, t0: f64, t: f64, steps: usize) -> Vec<f64> {
    let mut cuts = linspace(t0, t, steps + 1);
    cuts.extend(spec.breakpoints().iter().copied().filter(|&b| b > t0 && b < t));
    cuts.extend(spec.kicks_in(t0, t).map(|k| k.time));
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    let tiny = 1e-14 * (t - t0).abs().max(1.0);
    let mut merged: Vec<f64> = Vec::with_capacity(cuts.len());
    for c in cuts {
        match merged.last_mut() {
            Some(last) if (c - *last).abs() <= tiny => {
                // Keep exact kick/breakpoint times over grid round-off.
                if spec.kicks().iter().any(|k| k.time == c) || spec.breakpoints().contains(&c) {
                    *last = c;
                }
            }
            _ => merged.push(c),
        }
    }
    if let Some(first) = merged.first_mut() {
        *first = t0;
    }
    if let Some(last) = merged.last_mut() {
        *last = t;
    }
    merged
}

/// Time-ordered product `U(t, t0)` over `steps` uniform midpoint substeps.
pub fn step_propagator(spec: &HamiltonianSpec, t0: f64, t: f64, steps: usize) -> Result<CMatrix> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if !(t > t0) || !t0.is_finite() || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("need t > t0, got t0 = {t0}, t = {t}")));
    }
    if let Some(k) = spec.kicks().iter().find(|k| k.time == t0) {
        return Err(Error::KickAtStart { time: k.time });
    }
    propagate(spec, t0, t, steps)
}

/// Stepper core. A kick at `t0` is not applied; callers chaining cells rely
/// on the previous cell having taken it.
fn propagate(spec: &HamiltonianSpec, t0: f64, t: f64, steps: usize) -> Result<CMatrix> {
    let dim = spec.dim();
    let cuts = cut_points(spec, t0, t, steps);
    let mut u = CMatrix::identity(dim);
    let mut cached: Option<(f64, CMatrix)> = None;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dt = b - a;
        match spec.smooth() {
            SmoothPart::Zero => {}
            SmoothPart::Constant(h) => {
                let factor = match &cached {
                    Some((len, f)) if *len == dt => f.clone(),
                    _ => {
                        let f = evolution_factor(h, dt)?;
                        cached = Some((dt, f.clone()));
                        f
                    }
                };
                u = &factor * &u;
            }
            SmoothPart::Function { .. } => {
                let h = spec.smooth_at(0.5 * (a + b))?;
                u = &evolution_factor(&h, dt)? * &u;
            }
        }
        for kick in spec.kicks_in(a, b) {
            let factor = mat_exp_scaled(&kick.strength, Complex::new(0.0, -1.0))?;
            u = &factor * &u;
        }
    }
    Ok(u)
}

/// Time grid with a propagator triple at every node.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Vec<f64>,
    pub snapshots: Vec<PropagatorTriple<f64>>,
    /// `‖U ψ0‖ / ‖ψ0‖` per node; empty when no reference state was given.
    pub z_factors: Vec<f64>,
    /// `‖N − I‖_F` per node.
    pub n_distance: Vec<f64>,
}

/// Records `U`, `N`, `P` on a uniform grid of `grid_points` nodes over
/// `[t0, t1]`, accumulating cell propagators in a single pass.
pub fn evolve_trajectory(
    spec: &HamiltonianSpec,
    t0: f64,
    t1: f64,
    grid_points: usize,
    steps_per_cell: usize,
    psi0: Option<&[C64]>,
) -> Result<Trajectory> {
    if grid_points < 2 || steps_per_cell == 0 {
        return Err(Error::InvalidArgument("need grid_points >= 2 and steps_per_cell >= 1".into()));
    }
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidArgument(format!("need t1 > t0, got t0 = {t0}, t1 = {t1}")));
    }
    if let Some(psi) = psi0 {
        // Validates dimension and norm up front.
        z_factor(&CMatrix::identity(spec.dim()), psi)?;
    }
    let grid = linspace(t0, t1, grid_points);
    let mut snapshots = Vec::with_capacity(grid_points);
    let mut z_factors = Vec::new();
    let mut n_distance = Vec::with_capacity(grid_points);

    let mut u = CMatrix::identity(spec.dim());
    for (k, &t) in grid.iter().enumerate() {
        if k > 0 {
            let cell = propagate(spec, grid[k - 1], t, steps_per_cell)?;
            u = &cell * &u;
        } else if let Some(kick) = spec.kicks().iter().find(|kick| kick.time == t0) {
            return Err(Error::KickAtStart { time: kick.time });
        }
        let triple = pitaron(&u)?.with_interval(t0, t);
        if let Some(psi) = psi0 {
            z_factors.push(z_factor(&u, psi)?);
        }
        n_distance.push(triple.n_distance());
        snapshots.push(triple);
    }
    Ok(Trajectory {
        grid,
        snapshots,
        z_factors,
        n_distance,
    })
}

/// `‖U(t2, t1) U(t1, t0) − U(t2, t0)‖_F`, each factor stepped with `steps`
/// substeps.
pub fn markov_check(spec: &HamiltonianSpec, t0: f64, t1: f64, t2: f64, steps: usize) -> Result<f64> {
    if !(t0 < t1 && t1 < t2) {
        return Err(Error::InvalidArgument(format!("need t0 < t1 < t2, got {t0}, {t1}, {t2}")));
    }
    if spec.kicks().iter().any(|k| k.time == t1) {
        return Err(Error::KickAtIntermediate { time: t1 });
    }
    let first = step_propagator(spec, t0, t1, steps)?;
    let second = step_propagator(spec, t1, t2, steps)?;
    let whole = step_propagator(spec, t0, t2, steps)?;
    Ok((&second * &first).distance(&whole))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{dirac_comb_spec, hermitian_split, nhse_hamiltonian, sigma_x, sigma_y, sigma_z};
    use crate::linalg::mat_exp;

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    #[test]
    fn free_evolution_is_identity() {
        let spec = HamiltonianSpec::free(3).unwrap();
        let u = step_propagator(&spec, 0.0, 2.5, 7).unwrap();
        assert_eq!(u, CMatrix::identity(3));
    }

    #[test]
    fn sigma_z_half_turn() {
        let spec = HamiltonianSpec::constant(sigma_z()).unwrap();
        let u = step_propagator(&spec, 0.0, std::f64::consts::PI, 10).unwrap();
        assert!(u.approx_eq(&CMatrix::identity(2).scale_real(-1.0), 1e-13));
    }

    #[test]
    fn comb_phase_product() {
        let spec = dirac_comb_spec(&[0.6, 1.0, 1.2, 0.8], &[1.0, 2.0, 3.0, 4.0], 1).unwrap();
        let u = step_propagator(&spec, 0.0, 5.0, 3).unwrap();
        assert!((u[(0, 0)] - c(0.0, -3.6).exp()).norm() < 1e-14);
        // Right-closed: a kick at the end time is included, one at the start is rejected.
        let u = step_propagator(&spec, 0.0, 1.0, 1).unwrap();
        assert!((u[(0, 0)] - c(0.0, -0.6).exp()).norm() < 1e-14);
        assert_eq!(step_propagator(&spec, 1.0, 2.0, 1).err(), Some(Error::KickAtStart { time: 1.0 }));
        let single = dirac_comb_spec(&[std::f64::consts::PI], &[1.0], 1).unwrap();
        let u = step_propagator(&single, 0.0, 2.0, 4).unwrap();
        assert!((u[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalization_examples() {
        let u = sigma_x::<f64>().scale(c(0.0, -1.0));
        assert!(normalization_operator(&u).unwrap().approx_eq(&CMatrix::identity(2), 1e-14));
        let u = CMatrix::from_real_diag(&[2.0, 0.5]);
        let n = normalization_operator(&u).unwrap();
        assert!(n.approx_eq(&CMatrix::from_real_diag(&[0.5, 2.0]), 1e-14));
        let p = pitaron(&u).unwrap();
        assert!(p.p.approx_eq(&CMatrix::identity(2), 1e-14));
    }

    #[test]
    fn commuting_non_hermitian_closed_form() {
        let split = SplitHamiltonian::from_parts(
            CMatrix::from_real_diag(&[1.0, 2.0]),
            CMatrix::from_real_diag(&[0.3, -0.1]),
        );
        let u = mat_exp(&split.recombine().scale(c(0.0, -1.0))).unwrap();
        let triple = pitaron(&u).unwrap();
        let n_expected = CMatrix::from_real_diag(&[0.3f64.exp(), (-0.1f64).exp()]);
        let p_expected = CMatrix::from_diag(&[c(0.0, -1.0).exp(), c(0.0, -2.0).exp()]);
        assert!(triple.n.approx_eq(&n_expected, 1e-12));
        assert!(triple.p.approx_eq(&p_expected, 1e-12));
        assert!(triple.defect_p < 1e-12);
        assert!(triple.defect_u > 0.1);
    }

    #[test]
    fn z_factor_examples() {
        let u = sigma_y::<f64>();
        assert!((z_factor(&u, &[c(0.3, 1.0), c(-2.0, 0.5)]).unwrap() - 1.0).abs() < 1e-14);
        let u = CMatrix::from_real_diag(&[2.0, 0.5]);
        assert_eq!(z_factor(&u, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap(), 2.0);
        assert!(z_factor(&u, &[c(0.0, 0.0), c(0.0, 0.0)]).is_err());

        let h = nhse_hamiltonian(2, 0.0, &[1.0], &[0.5]).unwrap();
        let u = mat_exp(&h.scale(c(0.0, -1.0))).unwrap();
        // Oracle: H = [[0, 1/2], [3/2, 0]] has eigenvalues ±√3/2, so
        // exp(−iH) = cos(√3/2) I − i sin(√3/2) H / (√3/2).
        let w = 3f64.sqrt() / 2.0;
        let oracle = &CMatrix::identity(2).scale_real(w.cos()) + &h.scale(c(0.0, -w.sin() / w));
        assert!(u.approx_eq(&oracle, 1e-13));
        let z = z_factor(&u, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let z_oracle = (w.cos().powi(2) + (1.5 * w.sin() / w).powi(2)).sqrt();
        assert!((z - z_oracle).abs() < 1e-13);
        assert!((z - 1.0).abs() > 0.01);
    }

    #[test]
    fn rhs_examples() {
        let n = CMatrix::identity(2);
        assert_eq!(liouville_rhs(&sigma_z(), &n).frobenius_norm(), 0.0);
        let r = liouville_rhs(&sigma_z(), &sigma_x());
        assert!(r.approx_eq(&sigma_y::<f64>().scale_real(2.0), 1e-15));
        let diag_n = CMatrix::from_real_diag(&[2.0, 3.0]);
        assert_eq!(liouville_rhs(&CMatrix::from_real_diag(&[5.0, -1.0]), &diag_n).frobenius_norm(), 0.0);

        let split = SplitHamiltonian::from_parts(CMatrix::from_real_diag(&[1.0, 2.0]), CMatrix::zeros(2));
        assert_eq!(general_n_rhs(&split, &n).frobenius_norm(), 0.0);
        let split = SplitHamiltonian::from_parts(sigma_z(), CMatrix::zeros(2));
        assert!(general_n_rhs(&split, &sigma_x()).approx_eq(&sigma_y::<f64>().scale_real(2.0), 1e-15));

        let split = SplitHamiltonian::from_parts(
            CMatrix::from_real_diag(&[1.0, 2.0]),
            CMatrix::from_real_diag(&[0.3, -0.1]),
        );
        let n = CMatrix::from_real_diag(&[0.3f64.exp(), (-0.1f64).exp()]);
        let expected = CMatrix::from_real_diag(&[0.3 * 0.3f64.exp(), -0.1 * (-0.1f64).exp()]);
        assert!(general_n_rhs(&split, &n).approx_eq(&expected, 1e-15));
    }

    #[test]
    fn lyapunov_rhs_vanishes_for_unitary() {
        let h = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.5, -0.2)], vec![c(0.5, 0.2), c(-0.3, 0.0)]]).unwrap();
        let u = mat_exp(&h.scale(c(0.0, -0.7))).unwrap();
        let du = &h.scale(c(0.0, -1.0)) * &u;
        let x = lyapunov_n_rhs(&u, &du, &CMatrix::identity(2)).unwrap();
        assert!(x.frobenius_norm() < 1e-13);
    }

    #[test]
    fn lyapunov_rhs_matches_general_law_on_diagonal_family() {
        let h = CMatrix::from_diag(&[c(1.0, -0.3), c(2.0, 0.1)]);
        let split = hermitian_split(&h).unwrap();
        let u = mat_exp(&h.scale(c(0.0, -1.0))).unwrap();
        let du = &h.scale(c(0.0, -1.0)) * &u;
        let n = normalization_operator(&u).unwrap();
        let x = lyapunov_n_rhs(&u, &du, &n).unwrap();
        assert!(x.approx_eq(&general_n_rhs(&split, &n), 1e-10));
    }

    #[test]
    fn markov_examples() {
        let spec = HamiltonianSpec::constant(sigma_x()).unwrap();
        assert!(markov_check(&spec, 0.0, 0.7, 1.9, 5).unwrap() < 1e-12);
        let comb = dirac_comb_spec(&[0.6, 1.0], &[0.5, 3.0], 1).unwrap();
        assert!(markov_check(&comb, 0.0, 1.0, 2.0, 3).unwrap() < 1e-14);
        assert_eq!(
            markov_check(&comb, 0.0, 0.5, 2.0, 3).err(),
            Some(Error::KickAtIntermediate { time: 0.5 })
        );
    }

    #[test]
    fn trajectory_initial_condition_and_kicks() {
        let spec = dirac_comb_spec(&[0.6, 1.0], &[1.0, 2.0], 1).unwrap();
        let traj = evolve_trajectory(&spec, 0.0, 3.0, 7, 2, Some(&[c(1.0, 0.0)])).unwrap();
        assert_eq!(traj.snapshots[0].p, CMatrix::identity(1));
        assert_eq!(traj.grid.len(), 7);
        assert!(traj.z_factors.iter().all(|z| (z - 1.0).abs() < 1e-14));
        assert!(evolve_trajectory(&spec, 1.0, 3.0, 3, 1, None).is_err());
        assert!(evolve_trajectory(&spec, 0.0, 3.0, 1, 1, None).is_err());
    }
}
