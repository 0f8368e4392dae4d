//! Time-dependent Hamiltonian specifications and model builders.
//!
//! A [`HamiltonianSpec`] is a smooth part (zero, constant, or a caller
//! supplied evaluator) plus an ordered list of delta kicks `V_i δ(t − t_i)`.
//! Kicks are never smeared here; they are handed to the stepper as exact
//! factors.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::CMatrix;

/// Matrix-valued function of time.
pub type MatrixFn = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// Regular part of a Hamiltonian.
#[derive(Clone)]
pub enum SmoothPart {
    Zero,
    Constant(CMatrix),
    /// Evaluator with optional times at which it may jump. Steppers split
    /// their substeps at these times.
    Function {
        eval: MatrixFn,
        breakpoints: Vec<f64>,
    },
}

impl fmt::Debug for SmoothPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothPart::Zero => write!(f, "Zero"),
            SmoothPart::Constant(m) => f.debug_tuple("Constant").field(m).finish(),
            SmoothPart::Function { breakpoints, .. } => f
                .debug_struct("Function")
                .field("breakpoints", breakpoints)
                .finish_non_exhaustive(),
        }
    }
}

/// Instantaneous kick `strength · δ(t − time)`.
#[derive(Debug, Clone)]
pub struct Kick {
    pub time: f64,
    pub strength: CMatrix,
}

/// Smooth part plus time-ordered kicks, all of one dimension.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    dim: usize,
    smooth: SmoothPart,
    kicks: Vec<Kick>,
}

impl HamiltonianSpec {
    pub fn new(dim: usize, smooth: SmoothPart, kicks: Vec<Kick>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        match &smooth {
            SmoothPart::Constant(m) => {
                check_dim(dim, m)?;
                m.check_finite()?;
            }
            SmoothPart::Function { breakpoints, .. } => {
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) || breakpoints.iter().any(|b| !b.is_finite()) {
                    return Err(Error::InvalidArgument("breakpoints must be finite and increasing".into()));
                }
            }
            SmoothPart::Zero => {}
        }
        for (i, k) in kicks.iter().enumerate() {
            check_dim(dim, &k.strength)?;
            k.strength.check_finite()?;
            if !k.time.is_finite() || (i > 0 && kicks[i - 1].time >= k.time) {
                return Err(Error::NonIncreasingKicks { index: i });
            }
        }
        Ok(Self { dim, smooth, kicks })
    }

    /// `H = 0`.
    pub fn free(dim: usize) -> Result<Self> {
        Self::new(dim, SmoothPart::Zero, Vec::new())
    }

    /// Time-independent `H`.
    pub fn constant(h: CMatrix) -> Result<Self> {
        Self::new(h.dim(), SmoothPart::Constant(h), Vec::new())
    }

    /// Smooth evaluator without breakpoints.
    pub fn from_fn(dim: usize, eval: impl Fn(f64) -> CMatrix + Send + Sync + 'static) -> Result<Self> {
        Self::new(
            dim,
            SmoothPart::Function {
                eval: Arc::new(eval),
                breakpoints: Vec::new(),
            },
            Vec::new(),
        )
    }

    /// Piecewise-constant `H`: `first` before the first switch, then each
    /// switch matrix from its time onwards (right-continuous).
    pub fn piecewise_constant(first: CMatrix, switches: Vec<(f64, CMatrix)>) -> Result<Self> {
        let dim = first.dim();
        for (_, m) in &switches {
            check_dim(dim, m)?;
            m.check_finite()?;
        }
        first.check_finite()?;
        let breakpoints: Vec<f64> = switches.iter().map(|(t, _)| *t).collect();
        let eval = move |t: f64| {
            switches
                .iter()
                .rev()
                .find(|(start, _)| t >= *start)
                .map(|(_, m)| m.clone())
                .unwrap_or_else(|| first.clone())
        };
        Self::new(
            dim,
            SmoothPart::Function {
                eval: Arc::new(eval),
                breakpoints,
            },
            Vec::new(),
        )
    }

    /// Replaces the kick list.
    pub fn with_kicks(self, kicks: Vec<Kick>) -> Result<Self> {
        Self::new(self.dim, self.smooth, kicks)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn smooth(&self) -> &SmoothPart {
        &self.smooth
    }

    pub fn kicks(&self) -> &[Kick] {
        &self.kicks
    }

    pub fn is_kicked(&self) -> bool {
        !self.kicks.is_empty()
    }

    pub fn has_zero_smooth_part(&self) -> bool {
        matches!(self.smooth, SmoothPart::Zero)
    }

    pub fn breakpoints(&self) -> &[f64] {
        match &self.smooth {
            SmoothPart::Function { breakpoints, .. } => breakpoints,
            _ => &[],
        }
    }

    /// Kicks with `t0 < time <= t`.
    pub fn kicks_in(&self, t0: f64, t: f64) -> impl Iterator<Item = &Kick> {
        self.kicks.iter().filter(move |k| k.time > t0 && k.time <= t)
    }

    /// Smooth part at time `t`, validated for dimension and finiteness.
    pub fn smooth_at(&self, t: f64) -> Result<CMatrix> {
        let m = match &self.smooth {
            SmoothPart::Zero => return Ok(CMatrix::zeros(self.dim)),
            SmoothPart::Constant(m) => return Ok(m.clone()),
            SmoothPart::Function { eval, .. } => eval(t),
        };
        if m.dim() != self.dim || !m.is_finite() {
            return Err(Error::NonFiniteSample { time: t });
        }
        Ok(m)
    }
}

fn check_dim(dim: usize, m: &CMatrix) -> Result<()> {
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.dim(),
        });
    }
    Ok(())
}

/// `H = 𝓗 − i𝒥` with both parts Hermitian.
#[derive(Debug, Clone)]
pub struct SplitHamiltonian<T> {
    /// `𝓗 = (H + H^H)/2`.
    pub h_part: ComplexMatrix<T>,
    /// `𝒥 = i(H − H^H)/2`.
    pub j_part: ComplexMatrix<T>,
    /// `‖[𝓗, 𝒥]‖_F`. Reported, never enforced.
    pub commutator_norm: T,
}

impl<T: Real> SplitHamiltonian<T> {
    /// Builds a split directly from its two Hermitian parts.
    pub fn from_parts(h_part: ComplexMatrix<T>, j_part: ComplexMatrix<T>) -> Self {
        let commutator_norm = h_part.commutator(&j_part).frobenius_norm();
        Self {
            h_part,
            j_part,
            commutator_norm,
        }
    }

    /// `𝓗 − i𝒥`.
    pub fn recombine(&self) -> ComplexMatrix<T> {
        &self.h_part - &self.j_part.mul_i()
    }
}

/// Canonical Hermitian / anti-Hermitian split of `H`.
pub fn hermitian_split<T: Real>(h: &ComplexMatrix<T>) -> Result<SplitHamiltonian<T>> {
    h.check_finite()?;
    let half = T::lit(0.5);
    let adj = h.adjoint();
    let h_part = (h + &adj).scale_real(half);
    let j_part = (h - &adj).scale(Complex::new(T::zero(), half));
    Ok(SplitHamiltonian::from_parts(h_part, j_part))
}

pub fn sigma_x<T: Real>() -> ComplexMatrix<T> {
    let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
    ComplexMatrix::from_row_major(2, vec![z, o, o, z]).expect("finite")
}

pub fn sigma_y<T: Real>() -> ComplexMatrix<T> {
    let z = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    ComplexMatrix::from_row_major(2, vec![z, -i, i, z]).expect("finite")
}

pub fn sigma_z<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_diag(&[T::one(), -T::one()])
}

/// `f1 σ1 + f2 σ2 + f3 σ3 = [[f3, f1 − i f2], [f1 + i f2, −f3]]`.
pub fn pauli_matrix(f1: f64, f2: f64, f3: f64) -> CMatrix {
    CMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => Complex::new(f3, 0.0),
        (0, 1) => Complex::new(f1, -f2),
        (1, 0) => Complex::new(f1, f2),
        _ => Complex::new(-f3, 0.0),
    })
}

/// Two-level Hamiltonian `f1(t) σ1 + f2(t) σ2 + f3(t) σ3`.
pub fn pauli_hamiltonian(
    f1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    f2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    f3: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> HamiltonianSpec {
    HamiltonianSpec::from_fn(2, move |t| pauli_matrix(f1(t), f2(t), f3(t))).expect("dimension 2 is valid")
}

/// Single-particle NHSE lattice Hamiltonian of size `l`: `E` on the
/// diagonal, `hop_i − gamma_i` at `(i, i+1)` and `hop_i + gamma_i` at
/// `(i+1, i)`.
pub fn nhse_hamiltonian(l: usize, energy: f64, hop: &[f64], gamma: &[f64]) -> Result<CMatrix> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!("lattice size must be at least 2, got {l}")));
    }
    if hop.len() != l - 1 {
        return Err(Error::DimensionMismatch {
            expected: l - 1,
            found: hop.len(),
        });
    }
    if gamma.len() != l - 1 {
        return Err(Error::DimensionMismatch {
            expected: l - 1,
            found: gamma.len(),
        });
    }
    let mut h = CMatrix::zeros(l);
    for i in 0..l {
        h[(i, i)] = Complex::new(energy, 0.0);
    }
    for i in 0..l - 1 {
        h[(i, i + 1)] = Complex::new(hop[i] - gamma[i], 0.0);
        h[(i + 1, i)] = Complex::new(hop[i] + gamma[i], 0.0);
    }
    h.check_finite()?;
    Ok(h)
}

/// Truncated Dirac comb `Σ V_i δ(t − t_i) · I` on `dim` levels.
pub fn dirac_comb_spec(strengths: &[f64], times: &[f64], dim: usize) -> Result<HamiltonianSpec> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    dirac_comb_spec_with_generator(strengths, times, &CMatrix::identity(dim))
}

/// Dirac comb whose kicks are `V_i · generator`.
pub fn dirac_comb_spec_with_generator(
    strengths: &[f64],
    times: &[f64],
    generator: &CMatrix,
) -> Result<HamiltonianSpec> {
    if strengths.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: strengths.len(),
            found: times.len(),
        });
    }
    let kicks = strengths
        .iter()
        .zip(times)
        .map(|(&v, &t)| Kick {
            time: t,
            strength: generator.scale_real(v),
        })
        .collect();
    HamiltonianSpec::new(generator.dim(), SmoothPart::Zero, kicks)
}
