//! Picard successive approximations `y_{n+1}(x) = y0 + ∫_{x0}^x f(x′, y_n(x′)) dx′`
//! on a shared grid, the classical a-priori error bound, and the failure of
//! the scheme for delta right-hand sides.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{cumulative_trapezoid, linspace};
use crate::singular::{SmearKind, SmearedDelta};
use crate::CMatrix;

pub const MIN_GRID: usize = 64;

/// `M = max |f|`, `N = max |∂f/∂y|` and the interval length `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub m: f64,
    pub nlip: f64,
    pub h: f64,
}

#[derive(Debug, Clone)]
pub struct PicardRun {
    pub grid: Vec<f64>,
    /// `iterates[n][k] = y_n(grid[k])`; `iterates[0]` is constant.
    pub iterates: Vec<Vec<f64>>,
    pub bound_params: Option<BoundParams>,
    /// Sup-norm distance of every iterate to the reference, or to the last
    /// iterate when none was supplied.
    pub errors: Vec<f64>,
}

impl PicardRun {
    /// Replaces `errors` with sup-norm distances to `reference`.
    pub fn with_reference(mut self, reference: impl Fn(f64) -> f64) -> Self {
        let exact: Vec<f64> = self.grid.iter().map(|&x| reference(x)).collect();
        self.errors = self.iterates.iter().map(|y| sup_distance(y, &exact)).collect();
        self
    }

    pub fn with_bound(mut self, params: BoundParams) -> Self {
        self.bound_params = Some(params);
        self
    }

    /// A-priori bound for iterate `n`, if bound parameters are attached.
    pub fn bound(&self, n: usize) -> Option<f64> {
        self.bound_params.map(|p| error_bound(p.m, p.nlip, p.h, n))
    }

    /// `y_n` at the right end of the grid.
    pub fn final_value(&self, n: usize) -> f64 {
        *self.iterates[n].last().expect("grid has nodes")
    }
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs `n_max` Picard steps for `y′ = rhs(x, y)`, `y(x0) = y0`.
pub fn picard_iterate(
    rhs: impl Fn(f64, f64) -> f64,
    y0: f64,
    x0: f64,
    x1: f64,
    n_max: usize,
    grid: usize,
) -> Result<PicardRun> {
    picard_iterate_levels(|_, x, y| rhs(x, y), y0, x0, x1, n_max, grid)
}

/// Like [`picard_iterate`] but the right-hand side may depend on the index
/// `n ≥ 1` of the iterate being produced.
pub fn picard_iterate_levels(
    rhs: impl Fn(usize, f64, f64) -> f64,
    y0: f64,
    x0: f64,
    x1: f64,
    n_max: usize,
    grid: usize,
) -> Result<PicardRun> {
    if grid < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid must have at least {MIN_GRID} points, got {grid}")));
    }
    if !(x1 > x0) || !x0.is_finite() || !x1.is_finite() || !y0.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite x0 < x1 and y0, got {x0}, {x1}, {y0}")));
    }
    let xs = linspace(x0, x1, grid);
    let mut iterates = Vec::with_capacity(n_max + 1);
    iterates.push(vec![y0; grid]);
    for n in 1..=n_max {
        let prev: &Vec<f64> = iterates.last().expect("seeded");
        let mut f = Vec::with_capacity(grid);
        for (&x, &y) in xs.iter().zip(prev) {
            let v = rhs(n, x, y);
            if !v.is_finite() {
                return Err(Error::NonFiniteRhs { x, iterate: n });
            }
            f.push(v);
        }
        let next = cumulative_trapezoid(&xs, &f).into_iter().map(|c| y0 + c).collect();
        iterates.push(next);
    }
    let last = iterates.last().expect("seeded").clone();
    let errors = iterates.iter().map(|y| sup_distance(y, &last)).collect();
    Ok(PicardRun {
        grid: xs,
        iterates,
        bound_params: None,
        errors,
    })
}

/// `M N^{n−1} h^n / n!`.
pub fn error_bound(m: f64, nlip: f64, h: f64, n: usize) -> f64 {
    let mut v = m / nlip;
    for k in 1..=n {
        v *= nlip * h / k as f64;
    }
    v
}

/// `h = min(a, b/M)` for a rectangle `|x − x0| ≤ a`, `|y − y0| ≤ b`.
pub fn picard_interval(a: f64, b: f64, m: f64) -> f64 {
    a.min(b / m)
}

/// Picard run for `y′ = δ_ε(x − a) y`, `y(0) = 1`, against the direct
/// solution `exp(Θ(x − a))`.
#[derive(Debug, Clone)]
pub struct DeltaBreakdown {
    pub epsilon: f64,
    /// `y_n(x1)` for `n = 0..=n_max`.
    pub final_values: Vec<f64>,
    /// `y_2(x1) − y_1(x1)`; zero when fewer than two iterates were run.
    pub second_correction: f64,
    pub direct: f64,
}

fn check_resolution(delta: &SmearedDelta, x1: f64, grid: usize) -> Result<()> {
    let step = x1 / (grid - 1).max(1) as f64;
    if step > 0.125 * delta.width() {
        return Err(Error::Unresolved {
            step,
            width: delta.width(),
        });
    }
    Ok(())
}

pub fn picard_delta_breakdown(a: f64, epsilon: f64, x1: f64, n_max: usize, grid: usize) -> Result<DeltaBreakdown> {
    if !(a > 0.0) || !(x1 > 0.0) {
        return Err(Error::InvalidArgument(format!("need a > 0 and x1 > 0, got {a}, {x1}")));
    }
    let delta = SmearedDelta::new(SmearKind::Gaussian, epsilon, a)?;
    check_resolution(&delta, x1, grid)?;
    let run = picard_iterate(|x, y| delta.density(x) * y, 1.0, 0.0, x1, n_max, grid)?;
    let final_values: Vec<f64> = (0..=n_max).map(|n| run.final_value(n)).collect();
    let second_correction = if n_max >= 2 {
        final_values[2] - final_values[1]
    } else {
        0.0
    };
    Ok(DeltaBreakdown {
        epsilon,
        final_values,
        second_correction,
        direct: if x1 >= a { 1f64.exp() } else { 1.0 },
    })
}

/// Second-iterate correction `∫ δ_{ε₂}(x − a) ∫^x δ_{ε₁}(x′ − a)` when the
/// first iterate is built with width `eps_inner` and the second with
/// `eps_outer`.
pub fn asymmetric_second_correction(a: f64, eps_inner: f64, eps_outer: f64, x1: f64, grid: usize) -> Result<f64> {
    if !(a > 0.0) || !(x1 > 0.0) {
        return Err(Error::InvalidArgument(format!("need a > 0 and x1 > 0, got {a}, {x1}")));
    }
    let inner = SmearedDelta::new(SmearKind::Gaussian, eps_inner, a)?;
    let outer = SmearedDelta::new(SmearKind::Gaussian, eps_outer, a)?;
    check_resolution(&inner, x1, grid)?;
    check_resolution(&outer, x1, grid)?;
    let run = picard_iterate_levels(
        |n, x, y| if n == 1 { inner.density(x) * y } else { outer.density(x) * y },
        1.0,
        0.0,
        x1,
        2,
        grid,
    )?;
    let outer_mass = *cumulative_trapezoid(&run.grid, &run.grid.iter().map(|&x| outer.density(x)).collect::<Vec<_>>())
        .last()
        .expect("grid has nodes");
    Ok(run.final_value(2) - 1.0 - outer_mass)
}

/// Spread `max − min` of the asymmetric second-iterate correction over width
/// pairs with `ε₁/ε₂ = r` for each ratio, the larger width being `epsilon`.
pub fn breakdown_spread(a: f64, epsilon: f64, ratios: &[f64], x1: f64, grid: usize) -> Result<f64> {
    let mut values = Vec::with_capacity(ratios.len());
    for &r in ratios {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!("width ratio must be positive, got {r}")));
        }
        let (e1, e2) = if r <= 1.0 { (epsilon * r, epsilon) } else { (epsilon, epsilon / r) };
        values.push(asymmetric_second_correction(a, e1, e2, x1, grid)?);
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(if values.is_empty() { 0.0 } else { max - min })
}

/// `[[a, b], [c, −a]]` with `c = (1 − a²)/b`, a square root of the 2×2
/// identity. `b = 0` is allowed only for `a = ±1`, giving `±I`.
pub fn identity_sqrt_family(a: f64, b: f64) -> Result<CMatrix> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument("family parameters must be finite".into()));
    }
    let r = |x: f64| Complex::new(x, 0.0);
    if b == 0.0 {
        if a.abs() != 1.0 {
            return Err(Error::InvalidArgument(format!("b = 0 requires |a| = 1, got a = {a}")));
        }
        return Ok(CMatrix::identity(2).scale_real(a));
    }
    let c = (1.0 - a * a) / b;
    CMatrix::from_rows(&[vec![r(a), r(b)], vec![r(c), r(-a)]])
}

/// Two-branch solution of `x y′ = amp`: `amp·log|x| + c_pos` for `x > 0`
/// and `amp·log|x| + c_neg` for `x < 0`.
pub fn singular_ode_solution(amp: f64, c_pos: f64, c_neg: f64, x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::InvalidArgument("the two branches are defined only for finite x ≠ 0".into()));
    }
    let c = if x > 0.0 { c_pos } else { c_neg };
    Ok(amp * x.abs().ln() + c)
}
