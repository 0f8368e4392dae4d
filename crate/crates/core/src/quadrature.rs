//! Composite quadrature rules shared by the series, smearing and Picard code.

use crate::error::Result;
use crate::CMatrix;

/// Rounds a panel count up to the next even number, minimum 2.
pub fn even_panels(panels: usize) -> usize {
    let p = panels.max(2);
    p + (p % 2)
}

/// Composite Simpson nodes and weights on `[a, b]`.
pub fn simpson_rule(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let n = even_panels(panels);
    let h = (b - a) / n as f64;
    let nodes = (0..=n).map(|k| if k == n { b } else { a + h * k as f64 }).collect();
    let weights = (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect();
    (nodes, weights)
}

/// Composite Simpson integral of a scalar function.
pub fn simpson_scalar(a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let (nodes, weights) = simpson_rule(a, b, panels);
    nodes.iter().zip(&weights).map(|(&x, &w)| w * f(x)).sum()
}

/// Composite Simpson integral of a matrix-valued function.
pub fn simpson_matrix(
    a: f64,
    b: f64,
    panels: usize,
    dim: usize,
    mut f: impl FnMut(f64) -> Result<CMatrix>,
) -> Result<CMatrix> {
    let (nodes, weights) = simpson_rule(a, b, panels);
    let mut acc = CMatrix::zeros(dim);
    for (&x, &w) in nodes.iter().zip(&weights) {
        acc += &f(x)?.scale_real(w);
    }
    Ok(acc)
}

/// Running trapezoid integral `∫_{xs[0]}^{xs[k]} y` for every grid point.
pub fn cumulative_trapezoid(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len(), "grid and samples must align");
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..xs.len() {
        acc += 0.5 * (xs[k] - xs[k - 1]) * (ys[k] + ys[k - 1]);
        out.push(acc);
    }
    out
}

/// Uniform grid of `points` nodes on `[a, b]`.
pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![a];
    }
    let h = (b - a) / (points - 1) as f64;
    (0..points)
        .map(|k| if k + 1 == points { b } else { a + h * k as f64 })
        .collect()
}
