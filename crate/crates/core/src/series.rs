//! Perturbative expansions of `U`, `U^{-1}`, `N` and `P`.
//!
//! Iterated integrals are evaluated in iterative (nested) form: the level-`k`
//! integrand at an outer node `s` needs the level-`k−1` integral up to `s`,
//! which is recomputed by composite Simpson on `[t0, s]` with the same panel
//! count. Cost grows like `panels^k`, hence the order cap.
//!
//! Notation used below: `A = ∫ H(t′) dt′` and
//! `B = ∫ dt′ H(t′) ∫^{t′} dt″ H(t″)` over `[t0, t]`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::quadrature::{simpson_matrix, simpson_rule};
use crate::{CMatrix, C64};

/// Largest order accepted by the nested-quadrature expansions.
pub const MAX_ORDER: usize = 4;

/// Ordered expansion terms; term `k` carries `k` powers of `H`.
#[derive(Debug, Clone)]
pub struct SeriesExpansion {
    pub order: usize,
    pub terms: Vec<CMatrix>,
    pub partial_sums: Vec<CMatrix>,
    pub term_norms: Vec<f64>,
}

impl SeriesExpansion {
    /// Builds partial sums and norms from terms; `terms[0]` must be `I`.
    pub fn from_terms(terms: Vec<CMatrix>) -> Self {
        assert!(!terms.is_empty(), "expansion needs the zeroth term");
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut acc = CMatrix::zeros(terms[0].dim());
        for term in &terms {
            acc += term;
            partial_sums.push(acc.clone());
        }
        let term_norms = terms.iter().map(CMatrix::frobenius_norm).collect();
        Self {
            order: terms.len() - 1,
            terms,
            partial_sums,
            term_norms,
        }
    }

    /// Highest-order partial sum.
    pub fn sum(&self) -> &CMatrix {
        self.partial_sums.last().expect("non-empty")
    }
}

fn check_smooth(spec: &HamiltonianSpec, t0: f64, t: f64) -> Result<()> {
    if spec.is_kicked() {
        return Err(Error::KickedSpec);
    }
    if !(t > t0) {
        return Err(Error::InvalidArgument(format!("need t > t0, got t0 = {t0}, t = {t}")));
    }
    Ok(())
}

/// `F_k(s) = ∫_{t0}^{s} H(s′) F_{k−1}(s′) ds′`, `F_0 = I`.
fn nested_integral(spec: &HamiltonianSpec, t0: f64, s: f64, level: usize, panels: usize) -> Result<CMatrix> {
    if level == 0 {
        return Ok(CMatrix::identity(spec.dim()));
    }
    if s == t0 {
        return Ok(CMatrix::zeros(spec.dim()));
    }
    let mut edges = vec![t0];
    edges.extend(spec.breakpoints().iter().copied().filter(|&b| b > t0 && b < s));
    edges.push(s);
    let mut acc = CMatrix::zeros(spec.dim());
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let closes_at_jump = spec.breakpoints().contains(&b);
        // Panels shared out by segment length; a jump never sits inside a panel.
        let share = ((panels as f64) * (b - a) / (s - t0)).ceil() as usize;
        acc += &simpson_matrix(a, b, share, spec.dim(), |x| {
            // The evaluator is right-continuous; take the left limit at a closing jump.
            let h = if closes_at_jump && x == b {
                spec.smooth_at(b.next_down())?
            } else {
                spec.smooth_at(x)?
            };
            if level == 1 {
                Ok(h)
            } else {
                Ok(&h * &nested_integral(spec, t0, x, level - 1, panels)?)
            }
        })?;
    }
    Ok(acc)
}

/// First- and second-level integrals `(A, B)`.
fn first_two(spec: &HamiltonianSpec, t0: f64, t: f64, panels: usize) -> Result<(CMatrix, CMatrix)> {
    Ok((
        nested_integral(spec, t0, t, 1, panels)?,
        nested_integral(spec, t0, t, 2, panels)?,
    ))
}

fn minus_i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, -1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, 1.0),
    }
}

fn check_order(order: usize, max: usize) -> Result<()> {
    if order > max {
        return Err(Error::OrderTooLarge { order, max });
    }
    Ok(())
}

/// Truncated Dyson series: term `k` is `(−i)^k` times the `k`-fold
/// time-ordered integral `∫…∫_{t0<t_k<…<t_1<t} H(t_1)…H(t_k)`.
pub fn dyson_u(spec: &HamiltonianSpec, t0: f64, t: f64, order: usize, panels: usize) -> Result<SeriesExpansion> {
    check_order(order, MAX_ORDER)?;
    check_smooth(spec, t0, t)?;
    let terms = (0..=order)
        .map(|k| Ok(nested_integral(spec, t0, t, k, panels)?.scale(minus_i_pow(k))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesExpansion::from_terms(terms))
}

/// Series for `U^{-1}` fixed order by order by `U^{-1} U = I`:
/// `v_0 = I`, `v_m = −Σ_{j<m} v_j u_{m−j}`. Through second order this is
/// `I + iA − A² + B`.
pub fn dyson_u_inverse(
    spec: &HamiltonianSpec,
    t0: f64,
    t: f64,
    order: usize,
    panels: usize,
) -> Result<SeriesExpansion> {
    let u = dyson_u(spec, t0, t, order, panels)?;
    Ok(inverse_terms(&u.terms))
}

/// Order-by-order left inverse of a series whose zeroth term is `I`.
pub fn inverse_terms(u_terms: &[CMatrix]) -> SeriesExpansion {
    let dim = u_terms[0].dim();
    let mut inv: Vec<CMatrix> = vec![CMatrix::identity(dim)];
    for m in 1..u_terms.len() {
        let mut acc = CMatrix::zeros(dim);
        for (j, v) in inv.iter().enumerate() {
            acc += &(v * &u_terms[m - j]);
        }
        inv.push(-acc);
    }
    SeriesExpansion::from_terms(inv)
}

fn check_hermitian_samples(spec: &HamiltonianSpec, t0: f64, t: f64, panels: usize) -> Result<()> {
    let (nodes, _) = simpson_rule(t0, t, panels);
    for x in nodes {
        let h = spec.smooth_at(x)?;
        let defect = h.hermiticity_defect();
        if defect > 1e-10 * h.frobenius_norm().max(1.0) {
            return Err(Error::NonHermitianSample { time: x, defect });
        }
    }
    Ok(())
}

fn truncate(mut terms: Vec<CMatrix>, order: usize) -> SeriesExpansion {
    terms.truncate(order + 1);
    SeriesExpansion::from_terms(terms)
}

/// `N` for a Hermitian Hamiltonian through second order:
/// `I − ½A² + ½∫∫{H(t′), H(t″)}`.
pub fn norm_expansion_hermitian(
    spec: &HamiltonianSpec,
    t0: f64,
    t: f64,
    order: usize,
    panels: usize,
) -> Result<SeriesExpansion> {
    check_order(order, 2)?;
    check_smooth(spec, t0, t)?;
    check_hermitian_samples(spec, t0, t, panels)?;
    let dim = spec.dim();
    let (a, b) = first_two(spec, t0, t, panels)?;
    let anti = &b + &b.adjoint();
    let second = (&anti - &(&a * &a)).scale_real(0.5);
    Ok(truncate(vec![CMatrix::identity(dim), CMatrix::zeros(dim), second], order))
}

/// `P` for a Hermitian Hamiltonian through second order:
/// `I − iA − ½A² − ½∫∫[H(t′), H(t″)]`.
pub fn pitaron_expansion_hermitian(
    spec: &HamiltonianSpec,
    t0: f64,
    t: f64,
    order: usize,
    panels: usize,
) -> Result<SeriesExpansion> {
    check_order(order, 2)?;
    check_smooth(spec, t0, t)?;
    check_hermitian_samples(spec, t0, t, panels)?;
    let (a, b) = first_two(spec, t0, t, panels)?;
    let comm = &b - &b.adjoint();
    let second = -(&(&a * &a) + &comm).scale_real(0.5);
    Ok(truncate(
        vec![CMatrix::identity(spec.dim()), a.scale(Complex::new(0.0, -1.0)), second],
        order,
    ))
}

/// Second-order `N` for an arbitrary (possibly non-Hermitian) Hamiltonian:
///
/// `I + (i/2)(A − A^H) − (3/8)(A² + A^{H2}) + ¼|A|² + ½(B + B^H)`,
/// with `|A|² = A^H A`.
pub fn general_norm_expansion(spec: &HamiltonianSpec, t0: f64, t: f64, panels: usize) -> Result<SeriesExpansion> {
    check_smooth(spec, t0, t)?;
    let (a, b) = first_two(spec, t0, t, panels)?;
    let ah = a.adjoint();
    let first = (&a - &ah).scale(Complex::new(0.0, 0.5));
    let squares = &(&a * &a) + &(&ah * &ah);
    let second = &(&(&ah * &a).scale_real(0.25) - &squares.scale_real(0.375)) + &(&b + &b.adjoint()).scale_real(0.5);
    Ok(SeriesExpansion::from_terms(vec![CMatrix::identity(spec.dim()), first, second]))
}

/// Second-order `P = N U` for an arbitrary Hamiltonian:
///
/// `I − (i/2)(A + A^H) + ⅛A² − (3/8)A^{H2} − ¼|A|² − ½B + ½B^H`.
pub fn general_pitaron_expansion(
    spec: &HamiltonianSpec,
    t0: f64,
    t: f64,
    panels: usize,
) -> Result<SeriesExpansion> {
    check_smooth(spec, t0, t)?;
    let (a, b) = first_two(spec, t0, t, panels)?;
    let ah = a.adjoint();
    let first = (&a + &ah).scale(Complex::new(0.0, -0.5));
    let second = &(&(&a * &a).scale_real(0.125) - &(&ah * &ah).scale_real(0.375))
        - &(&(&ah * &a).scale_real(0.25) + &(&b - &b.adjoint()).scale_real(0.5));
    Ok(SeriesExpansion::from_terms(vec![CMatrix::identity(spec.dim()), first, second]))
}

/// `∫dt′ ∫^{t′}dt″ ‖H(t″) H(t′)‖_F`, a matrix-norm stand-in for the
/// absolute-convergence condition on the second-order Dyson integrand.
pub fn absolute_convergence_surrogate(spec: &HamiltonianSpec, t0: f64, t: f64, panels: usize) -> Result<f64> {
    check_smooth(spec, t0, t)?;
    let (outer, w_outer) = simpson_rule(t0, t, panels);
    let mut acc = 0.0;
    for (&x, &w) in outer.iter().zip(&w_outer) {
        if x == t0 {
            continue;
        }
        let hx = spec.smooth_at(x)?;
        let (inner, w_inner) = simpson_rule(t0, x, panels);
        let mut inner_acc = 0.0;
        for (&y, &v) in inner.iter().zip(&w_inner) {
            inner_acc += v * (&spec.smooth_at(y)? * &hx).frobenius_norm();
        }
        acc += w * inner_acc;
    }
    Ok(acc)
}

/// Least-squares slope of `log ‖S_order(T) − exact(T)‖` against `log T`
/// for the Dyson partial sum on `[t0, t0 + T]`.
pub fn convergence_order(
    spec: &HamiltonianSpec,
    t0: f64,
    exact: impl Fn(f64) -> Result<CMatrix>,
    order: usize,
    t_list: &[f64],
    panels: usize,
) -> Result<f64> {
    if t_list.len() < 2 {
        return Err(Error::DegenerateFit("need at least two interval lengths".into()));
    }
    let (lo, hi) = t_list
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(lo > 0.0) || hi / lo < 10.0 - 1e-12 {
        return Err(Error::DegenerateFit("interval lengths must be positive and span a decade".into()));
    }
    let mut xs = Vec::with_capacity(t_list.len());
    let mut ys = Vec::with_capacity(t_list.len());
    for &len in t_list {
        let series = dyson_u(spec, t0, t0 + len, order, panels)?;
        let err = series.sum().distance(&exact(len)?);
        if !(err > 0.0) || !err.is_finite() {
            return Err(Error::DegenerateFit(format!("truncation error {err:e} at T = {len}")));
        }
        xs.push(len.ln());
        ys.push(err.ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
