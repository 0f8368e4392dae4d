//! Closed forms and numerical probes for delta-kick dynamics.
//!
//! A scalar comb `H(t) = Σ V_i δ(t − t_i)` makes the first-order terms of
//! every expansion a step function of `t`. The second-order propagator term
//! contains `∫ δ(t′ − t_i) Θ(t′ − t_i) dt′`, a product of two distributions
//! with no canonical value. Those terms are reported as flags and never
//! evaluated. The smearing routines show how any number assigned to them
//! depends on the regularization.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{cumulative_trapezoid, linspace, simpson_scalar};
use crate::C64;

/// `base + Σ_{t_i ≤ t} delta_i`, right-continuous at every jump.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    base: f64,
    jumps: Vec<(f64, f64)>,
}

impl StepFunction {
    pub fn new(base: f64, jumps: Vec<(f64, f64)>) -> Result<Self> {
        if !base.is_finite() {
            return Err(Error::InvalidArgument("step function base must be finite".into()));
        }
        for (i, &(t, d)) in jumps.iter().enumerate() {
            if !t.is_finite() || !d.is_finite() || (i > 0 && jumps[i - 1].0 >= t) {
                return Err(Error::NonIncreasingKicks { index: i });
            }
        }
        Ok(Self { base, jumps })
    }

    /// Cumulative kick strength `S(t) = Σ V_i Θ(t − t_i)`.
    pub fn from_comb(strengths: &[f64], times: &[f64]) -> Result<Self> {
        if strengths.len() != times.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: strengths.len(),
            });
        }
        Self::new(0.0, times.iter().copied().zip(strengths.iter().copied()).collect())
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.base
            + self
                .jumps
                .iter()
                .take_while(|(time, _)| *time <= t)
                .map(|(_, d)| d)
                .sum::<f64>()
    }
}

/// `1 − ½ S(t)²`: the normalization operator of a scalar comb with the
/// indefinite pieces dropped.
pub fn comb_truncated_norm(strengths: &[f64], times: &[f64], t: f64) -> Result<f64> {
    let s = StepFunction::from_comb(strengths, times)?.eval(t);
    Ok(1.0 - 0.5 * s * s)
}

/// A second-order term `−V_i² ∫ δ(t′ − t_i) Θ(t′ − t_i) dt′` that is left
/// unevaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct IndefiniteTerm {
    pub kick_index: usize,
    pub time: f64,
    /// Prefactor multiplying the indefinite integral.
    pub coefficient: f64,
}

/// Propagator terms of a scalar comb through second order.
#[derive(Debug, Clone, PartialEq)]
pub struct CombExpansion {
    pub t: f64,
    /// `S(t)`.
    pub cumulative_strength: f64,
    pub order0: C64,
    /// `−i S(t)`.
    pub order1: C64,
    /// `−Σ_{j<i} V_i V_j` over kicks already passed.
    pub order2_defined: C64,
    /// Defined part of the second-order normalization term, `−½ S(t)²`.
    pub norm_order2: f64,
    pub indefinite: Vec<IndefiniteTerm>,
}

impl CombExpansion {
    pub fn indefinite_count(&self) -> usize {
        self.indefinite.len()
    }

    /// Sum of the terms that have a value. Not a propagator approximation
    /// while any flag is raised.
    pub fn defined_sum(&self) -> C64 {
        self.order0 + self.order1 + self.order2_defined
    }
}

pub fn comb_expansion_terms(strengths: &[f64], times: &[f64], t: f64) -> Result<CombExpansion> {
    let step = StepFunction::from_comb(strengths, times)?;
    let passed: Vec<(usize, f64, f64)> = step
        .jumps()
        .iter()
        .enumerate()
        .filter(|(_, (time, _))| *time > 0.0 && *time <= t)
        .map(|(i, &(time, v))| (i, time, v))
        .collect();
    let s = step.eval(t);
    let mut ordered = 0.0;
    for (a, &(_, _, vi)) in passed.iter().enumerate() {
        for &(_, _, vj) in &passed[..a] {
            ordered += vi * vj;
        }
    }
    let indefinite = passed
        .iter()
        .map(|&(kick_index, time, v)| IndefiniteTerm {
            kick_index,
            time,
            coefficient: -v * v,
        })
        .collect();
    Ok(CombExpansion {
        t,
        cumulative_strength: s,
        order0: Complex::new(1.0, 0.0),
        order1: Complex::new(0.0, -s),
        order2_defined: Complex::new(-ordered, 0.0),
        norm_order2: -0.5 * s * s,
        indefinite,
    })
}

/// Second-order pitaron partial sum `1 − iS − S²/2` as `(re, im)`.
pub fn comb_pitaron_expansion(strengths: &[f64], times: &[f64], t: f64) -> Result<(f64, f64)> {
    let s = StepFunction::from_comb(strengths, times)?.eval(t);
    Ok((1.0 - 0.5 * s * s, -s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmearKind {
    /// Lorentzian `ε / (π (x² + ε²))`.
    Nascent,
    /// Heat kernel `exp(−x²/4ε) / (2√(πε))`.
    Gaussian,
}

/// Half-width of the nascent window in units of `ε`.
const NASCENT_WINDOW: f64 = 1e7;

/// Regularized delta `δ_ε(x − center)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmearedDelta {
    kind: SmearKind,
    epsilon: f64,
    center: f64,
}

impl SmearedDelta {
    pub fn new(kind: SmearKind, epsilon: f64, center: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() || !center.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "smearing needs finite epsilon > 0 and a finite center, got {epsilon}, {center}"
            )));
        }
        Ok(Self { kind, epsilon, center })
    }

    pub fn kind(&self) -> SmearKind {
        self.kind
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn density(&self, x: f64) -> f64 {
        let d = x - self.center;
        let e = self.epsilon;
        match self.kind {
            SmearKind::Nascent => e / (std::f64::consts::PI * (d * d + e * e)),
            SmearKind::Gaussian => (-d * d / (4.0 * e)).exp() / (2.0 * (std::f64::consts::PI * e).sqrt()),
        }
    }

    /// Length scale the quadrature grid has to resolve.
    pub fn width(&self) -> f64 {
        match self.kind {
            SmearKind::Nascent => self.epsilon,
            SmearKind::Gaussian => (2.0 * self.epsilon).sqrt(),
        }
    }

    /// Support window outside of which the density is treated as zero.
    pub fn window(&self) -> (f64, f64) {
        let half = match self.kind {
            SmearKind::Nascent => NASCENT_WINDOW * self.epsilon,
            SmearKind::Gaussian => 10.0 * self.epsilon.sqrt(),
        };
        (self.center - half, self.center + half)
    }

    /// Numerical mass over the window.
    ///
    /// The Lorentzian is integrated in the angle `θ` with `x = center + ε tan θ`,
    /// which turns its long tails into a bounded interval.
    pub fn mass(&self, panels: usize) -> f64 {
        let (lo, hi) = self.window();
        match self.kind {
            SmearKind::Gaussian => simpson_scalar(lo, hi, panels, |x| self.density(x)),
            SmearKind::Nascent => {
                let e = self.epsilon;
                let th_lo = ((lo - self.center) / e).atan();
                let th_hi = ((hi - self.center) / e).atan();
                simpson_scalar(th_lo, th_hi, panels, |th| {
                    let sec = 1.0 / th.cos();
                    self.density(self.center + e * th.tan()) * e * sec * sec
                })
            }
        }
    }
}

/// Finest allowed grid step as a fraction of the smearing width.
const RESOLUTION: f64 = 0.125;

/// `∫_0^t dt′ δ_{ε₂}(t′ − t₁) ∫_0^{t′} dt″ δ_{ε₁}(t″ − t₁)` by nested
/// cumulative trapezoid on `panels` uniform cells.
///
/// The grid covers the union of both smearing windows, capped to `[0, t]`.
pub fn smeared_second_order(eps1: f64, eps2: f64, kind: SmearKind, t1: f64, t: f64, panels: usize) -> Result<f64> {
    if !(t > t1 && t1 > 0.0) {
        return Err(Error::InvalidArgument(format!("need t > t1 > 0, got t1 = {t1}, t = {t}")));
    }
    let inner = SmearedDelta::new(kind, eps1, t1)?;
    let outer = SmearedDelta::new(kind, eps2, t1)?;
    let (a1, b1) = inner.window();
    let (a2, b2) = outer.window();
    let lo = a1.min(a2).max(0.0);
    let hi = b1.max(b2).min(t);
    let panels = panels.max(1);
    let step = (hi - lo) / panels as f64;
    let width = inner.width().min(outer.width());
    if step > RESOLUTION * width {
        return Err(Error::Unresolved { step, width });
    }
    let xs = linspace(lo, hi, panels + 1);
    let inner_density: Vec<f64> = xs.iter().map(|&x| inner.density(x)).collect();
    let cdf = cumulative_trapezoid(&xs, &inner_density);
    let integrand: Vec<f64> = xs.iter().zip(&cdf).map(|(&x, &c)| outer.density(x) * c).collect();
    Ok(*cumulative_trapezoid(&xs, &integrand).last().expect("grid has nodes"))
}

/// One row of the limit/integral exchange counterexamples.
#[derive(Debug, Clone, PartialEq)]
pub struct DominatedRow {
    pub n: u32,
    /// `∫ f_n` for `f_n = 1/n` on `(0, n)`.
    pub family1_integral: f64,
    /// `∫_0^∞ n x exp(−n x²) dx` by quadrature.
    pub family2_integral: f64,
    /// Neglected tail `½ exp(−n X²)` beyond the window end `X`.
    pub family2_tail: f64,
    pub family1_at_one: f64,
    pub family2_at_one: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominatedReport {
    pub rows: Vec<DominatedRow>,
    /// Pointwise limit of both families at every `x > 0`.
    pub pointwise_limit: f64,
}

const FAMILY2_DECAY: f64 = 30.0;
const FAMILY2_PANELS: usize = 4000;
const TAIL_TOL: f64 = 1e-12;

pub fn dominated_convergence_demos(n_list: &[u32]) -> Result<DominatedReport> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let nf = f64::from(n);
        let height = 1.0 / nf;
        let family1_integral = nf * height;
        let x_end = (FAMILY2_DECAY / nf).sqrt();
        let family2_tail = 0.5 * (-nf * x_end * x_end).exp();
        if family2_tail > TAIL_TOL {
            return Err(Error::WindowTooSmall { tail: family2_tail });
        }
        let family2_integral = simpson_scalar(0.0, x_end, FAMILY2_PANELS, |x| nf * x * (-nf * x * x).exp());
        rows.push(DominatedRow {
            n,
            family1_integral,
            family2_integral,
            family2_tail,
            family1_at_one: if 1.0 < nf { height } else { 0.0 },
            family2_at_one: nf * (-nf).exp(),
        });
    }
    Ok(DominatedReport {
        rows,
        pointwise_limit: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const V: [f64; 4] = [0.6, 1.0, 1.2, 0.8];
    const T: [f64; 4] = [1.0, 2.0, 3.0, 4.0];

    #[test]
    fn step_function_right_continuous() {
        let s = StepFunction::from_comb(&V, &T).unwrap();
        assert_eq!(s.eval(0.5), 0.0);
        assert_eq!(s.eval(1.0), 0.6);
        assert!((s.eval(2.5) - 1.6).abs() < 1e-15);
        assert!(StepFunction::new(0.0, vec![(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(StepFunction::from_comb(&V, &T[..3]).is_err());
    }

    #[test]
    fn truncated_norm_staircase() {
        assert_eq!(comb_truncated_norm(&V, &T, 0.5).unwrap(), 1.0);
        assert!((comb_truncated_norm(&V, &T, 2.5).unwrap() + 0.28).abs() < 1e-12);
        assert!((comb_truncated_norm(&V, &T, 5.0).unwrap() + 5.48).abs() < 1e-12);
    }

    #[test]
    fn expansion_flags() {
        let single = comb_expansion_terms(&[0.3], &[1.0], 2.0).unwrap();
        assert_eq!(single.order1, Complex::new(0.0, -0.3));
        assert_eq!(single.indefinite_count(), 1);
        assert_eq!(single.order2_defined, Complex::new(0.0, 0.0));

        let before = comb_expansion_terms(&V, &T, 0.5).unwrap();
        assert_eq!(before.indefinite_count(), 0);
        assert_eq!(before.defined_sum(), Complex::new(1.0, 0.0));

        let all = comb_expansion_terms(&V, &T, 10.0).unwrap();
        assert!((all.order1.im + 3.6).abs() < 1e-12);
        assert_eq!(all.indefinite_count(), 4);
        // Σ_{j<i} V_i V_j = (S² − Σ V_i²)/2.
        let sq: f64 = V.iter().map(|v| v * v).sum();
        assert!((all.order2_defined.re + 0.5 * (3.6 * 3.6 - sq)).abs() < 1e-12);
    }

    #[test]
    fn pitaron_expansion_is_taylor_of_phase() {
        let (re, im) = comb_pitaron_expansion(&V, &T, 10.0).unwrap();
        assert!((re - (1.0 - 6.48)).abs() < 1e-12);
        assert!((im + 3.6).abs() < 1e-12);
        let (re, im) = comb_pitaron_expansion(&[0.1], &[1.0], 2.0).unwrap();
        let exact = Complex::new(0.0, -0.1f64).exp();
        assert!((Complex::new(re, im) - exact).norm() <= 0.1f64.powi(3) / 6.0);
    }

    #[test]
    fn smeared_masses() {
        for kind in [SmearKind::Gaussian, SmearKind::Nascent] {
            for eps in [1e-3, 1e-2, 1e-1] {
                let d = SmearedDelta::new(kind, eps, 0.3).unwrap();
                assert!((d.mass(20_000) - 1.0).abs() < 1e-6, "{kind:?} {eps}");
            }
        }
        assert!(SmearedDelta::new(SmearKind::Gaussian, 0.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_smearing_gives_half() {
        let v = smeared_second_order(1e-2, 1e-2, SmearKind::Gaussian, 1.0, 2.0, 20_000).unwrap();
        assert!((v - 0.5).abs() < 0.02, "{v}");
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let r = smeared_second_order(1e-4, 1e-4, SmearKind::Nascent, 1.0, 2.0, 100);
        assert!(matches!(r, Err(Error::Unresolved { .. })));
    }

    #[test]
    fn dominated_families() {
        let rep = dominated_convergence_demos(&[1, 10, 100]).unwrap();
        for row in &rep.rows {
            assert_eq!(row.family1_integral, 1.0);
            assert!((row.family2_integral - 0.5).abs() < 1e-8);
        }
        assert!(rep.rows.windows(2).all(|w| w[1].family2_at_one < w[0].family2_at_one));
        assert!(dominated_convergence_demos(&[0]).is_err());
    }
}
