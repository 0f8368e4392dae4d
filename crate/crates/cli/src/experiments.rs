//! One runner per experiment kind. Each returns a table and the scalar
//! results; nothing touches the filesystem here.

use pitaron::hamiltonian::{dirac_comb_spec, hermitian_split, HamiltonianSpec, SmoothPart};
use pitaron::linalg::evolution_factor;
use pitaron::picard::{asymmetric_second_correction, picard_delta_breakdown, picard_iterate, BoundParams};
use pitaron::propagation::{evolve_trajectory, pitaron, step_propagator, Trajectory};
use pitaron::series::{dyson_u, general_pitaron_expansion, pitaron_expansion_hermitian};
use pitaron::singular::{
    comb_expansion_terms, comb_pitaron_expansion, comb_truncated_norm, dominated_convergence_demos,
    smeared_second_order, SmearKind,
};
use pitaron::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{
    Boundary, CombParams, CounterexampleParams, DysonParams, EvolveParams, ExperimentConfig, NamedState, NhseParams,
    Params, PicardParams, SmearKindConfig, StateConfig,
};
use crate::error::CliError;
use crate::output::{Cell, Summary, Table};

/// Hermiticity threshold above which a sampled Hamiltonian is treated as
/// non-Hermitian for the choice of expansion.
const HERMITIAN_TOL: f64 = 1e-12;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Table, Summary), CliError> {
    match &cfg.params {
        Params::Evolve(p) => evolve(p, cfg.seed),
        Params::Nhse(p) => nhse(p),
        Params::Comb(p) => comb(p),
        Params::Dyson(p) => dyson(p),
        Params::Picard(p) => picard(p),
        Params::Counterexample(p) => counterexample(p),
    }
}

fn state(cfg: Option<&StateConfig>, dim: usize, seed: u64) -> Result<Vec<C64>, CliError> {
    let basis = |k: usize| -> Result<Vec<C64>, CliError> {
        if k >= dim {
            return Err(CliError::Config(format!("psi0 basis index {k} out of range for dimension {dim}")));
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Ok(v)
    };
    match cfg {
        None => basis(0),
        Some(StateConfig::Basis(k)) => basis(*k),
        Some(StateConfig::Amplitudes(a)) => {
            if a.len() != dim {
                return Err(CliError::Config(format!("psi0 has {} entries, expected {dim}", a.len())));
            }
            Ok(a.iter().map(|&[re, im]| C64::new(re, im)).collect())
        }
        Some(StateConfig::Named(NamedState::Random)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..dim)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect())
        }
    }
}

fn trajectory_table(traj: &Trajectory, n_trunc: Option<&[f64]>) -> Table {
    let mut header = vec!["t", "defect_U", "defect_P", "n_distance", "z_factor"];
    if n_trunc.is_some() {
        header.push("n_trunc");
    }
    let mut table = Table::new(header);
    for (k, s) in traj.snapshots.iter().enumerate() {
        let mut row = vec![
            Cell::Num(traj.grid[k]),
            Cell::Num(s.defect_u),
            Cell::Num(s.defect_p),
            Cell::Num(traj.n_distance[k]),
            traj.z_factors.get(k).map_or(Cell::Empty, |&z| Cell::Num(z)),
        ];
        if let Some(nt) = n_trunc {
            row.push(Cell::Num(nt[k]));
        }
        table.push(row);
    }
    table
}

fn trajectory_summary(traj: &Trajectory, summary: &mut Summary) {
    let max = |f: &dyn Fn(usize) -> f64| (0..traj.grid.len()).map(f).fold(0.0, f64::max);
    summary.set_f64("max_defect_U", max(&|k| traj.snapshots[k].defect_u));
    summary.set_f64("max_defect_P", max(&|k| traj.snapshots[k].defect_p));
    summary.set_f64("max_n_distance", max(&|k| traj.n_distance[k]));
    summary.set_f64("max_cond_U", max(&|k| traj.snapshots[k].cond_u));
    if let Some(&z) = traj.z_factors.last() {
        summary.set_f64("final_z_factor", z);
    }
}

fn commutator_warning(summary: &mut Summary, norm: f64) {
    summary.set_f64("commutator_norm", norm);
    if norm > 0.0 {
        summary.warn(format!(
            "Hermitian and anti-Hermitian parts do not commute (commutator norm {norm:e}); reported, not enforced"
        ));
    }
}

fn evolve(p: &EvolveParams, seed: u64) -> Result<(Table, Summary), CliError> {
    let (spec, comm) = p.hamiltonian.build(&p.kicks)?;
    let psi = state(p.psi0.as_ref(), spec.dim(), seed)?;
    let traj = evolve_trajectory(&spec, p.t0, p.t1, p.grid_points, p.steps_per_cell, Some(&psi))?;
    let mut summary = Summary::default();
    summary.set("dim", spec.dim());
    trajectory_summary(&traj, &mut summary);
    if let Some(norm) = comm {
        commutator_warning(&mut summary, norm);
    }
    Ok((trajectory_table(&traj, None), summary))
}

fn nhse(p: &NhseParams) -> Result<(Table, Summary), CliError> {
    let h = p.matrix()?;
    let split = hermitian_split(&h)?;
    let spec = HamiltonianSpec::constant(h)?;
    let site = match p.boundary {
        Boundary::Left => 0,
        Boundary::Right => p.l - 1,
    };
    let psi = state(Some(&StateConfig::Basis(site)), p.l, 0)?;
    let traj = evolve_trajectory(&spec, 0.0, p.t1, p.grid_points, p.steps_per_cell, Some(&psi))?;
    let mut summary = Summary::default();
    summary.set("dim", p.l);
    summary.set("start_site", site);
    trajectory_summary(&traj, &mut summary);
    commutator_warning(&mut summary, split.commutator_norm);
    Ok((trajectory_table(&traj, None), summary))
}

fn comb(p: &CombParams) -> Result<(Table, Summary), CliError> {
    let spec = dirac_comb_spec(&p.strengths, &p.times, p.dim)?;
    let psi = state(None, p.dim, 0)?;
    let traj = evolve_trajectory(&spec, 0.0, p.t1, p.grid_points, 1, Some(&psi))?;
    let n_trunc = traj
        .grid
        .iter()
        .map(|&t| comb_truncated_norm(&p.strengths, &p.times, t))
        .collect::<Result<Vec<_>, _>>()?;
    let terms = comb_expansion_terms(&p.strengths, &p.times, p.t1)?;
    let (re, im) = comb_pitaron_expansion(&p.strengths, &p.times, p.t1)?;

    let mut summary = Summary::default();
    trajectory_summary(&traj, &mut summary);
    summary.set_f64("final_n_trunc", *n_trunc.last().expect("grid has nodes"));
    summary.set_f64("cumulative_strength", terms.cumulative_strength);
    summary.set_f64("pitaron_expansion_re", re);
    summary.set_f64("pitaron_expansion_im", im);
    summary.set_f64("order2_defined", terms.order2_defined.re);
    summary.set("indefinite_count", terms.indefinite_count());
    if terms.indefinite_count() > 0 {
        let times: Vec<String> = terms.indefinite.iter().map(|t| t.time.to_string()).collect();
        summary.warn(format!(
            "{} indefinite delta-times-step products at t = [{}]; left unevaluated",
            terms.indefinite_count(),
            times.join(", ")
        ));
    }
    Ok((trajectory_table(&traj, Some(&n_trunc)), summary))
}

fn is_hermitian_on(spec: &HamiltonianSpec, t0: f64, t: f64, samples: usize) -> Result<bool, CliError> {
    for k in 0..=samples {
        let x = t0 + (t - t0) * k as f64 / samples as f64;
        let h = spec.smooth_at(x)?;
        if h.hermiticity_defect() > HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn reference_u(spec: &HamiltonianSpec, t0: f64, t: f64, steps: usize) -> Result<CMatrix, CliError> {
    Ok(match spec.smooth() {
        SmoothPart::Constant(h) if !spec.is_kicked() => evolution_factor(h, t - t0)?,
        _ => step_propagator(spec, t0, t, steps)?,
    })
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn dyson(p: &DysonParams) -> Result<(Table, Summary), CliError> {
    let (spec, comm) = p.hamiltonian.build(&[])?;
    if p.t_list.is_empty() || p.orders.is_empty() {
        return Err(CliError::Config("t_list and orders must not be empty".into()));
    }
    if let Some(bad) = p.t_list.iter().find(|&&t| !(t > 0.0)) {
        return Err(CliError::Config(format!("t_list entries must be positive, got {bad}")));
    }
    let max_order = *p.orders.iter().max().expect("non-empty");
    let mut table = Table::new(vec!["T", "order", "err_partial", "defect_partial", "err_pitaron_expansion"]);
    let mut summary = Summary::default();
    let mut errs: Vec<Vec<(f64, f64)>> = vec![Vec::new(); p.orders.len()];
    let mut pitaron_errs: Vec<Vec<(f64, f64)>> = vec![Vec::new(); p.orders.len()];
    let mut skipped_pitaron = false;
    let mut hermitian_everywhere = true;

    for &len in &p.t_list {
        let t = p.t0 + len;
        let u_ref = reference_u(&spec, p.t0, t, p.reference_steps)?;
        let p_ref = pitaron(&u_ref)?.p;
        let series = dyson_u(&spec, p.t0, t, max_order, p.panels)?;
        let hermitian = is_hermitian_on(&spec, p.t0, t, p.panels)?;
        hermitian_everywhere &= hermitian;
        let pit = if hermitian {
            pitaron_expansion_hermitian(&spec, p.t0, t, 2.min(max_order), p.panels)?
        } else {
            general_pitaron_expansion(&spec, p.t0, t, p.panels)?
        };
        for (i, &order) in p.orders.iter().enumerate() {
            let partial = &series.partial_sums[order];
            let err = partial.distance(&u_ref);
            errs[i].push((len, err));
            let pit_err = pit.partial_sums.get(order).map(|s| s.distance(&p_ref));
            match pit_err {
                Some(e) => pitaron_errs[i].push((len, e)),
                None => skipped_pitaron = true,
            }
            table.push(vec![
                Cell::Num(len),
                Cell::Int(order as u64),
                Cell::Num(err),
                Cell::Num(partial.unitarity_defect()),
                pit_err.map_or(Cell::Empty, Cell::Num),
            ]);
        }
    }
    for (i, &order) in p.orders.iter().enumerate() {
        if let Some(s) = fit_slope(&errs[i]) {
            summary.set_f64(&format!("slope_order_{order}"), s);
        }
        if let Some(s) = fit_slope(&pitaron_errs[i]) {
            summary.set_f64(&format!("pitaron_slope_order_{order}"), s);
        }
    }
    summary.set("hermitian", hermitian_everywhere);
    if skipped_pitaron {
        summary.warn("pitaron expansion is available through second order only; higher orders left blank");
    }
    if let Some(norm) = comm {
        commutator_warning(&mut summary, norm);
    }
    let span = p.t_list.iter().fold(0.0f64, |m, &x| m.max(x)) / p.t_list.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    if span < 10.0 {
        summary.warn("t_list spans less than a decade; slopes are poorly determined");
    }
    Ok((table, summary))
}

fn picard(p: &PicardParams) -> Result<(Table, Summary), CliError> {
    let mut summary = Summary::default();
    match *p {
        PicardParams::Exponential { g, y0, x1, n_max, grid } => {
            if !(x1 > 0.0) {
                return Err(CliError::Config(format!("x1 must be positive, got {x1}")));
            }
            let nlip = g.abs();
            let run = picard_iterate(|_, y| g * y, y0, 0.0, x1, n_max, grid)?
                .with_reference(|x| y0 * (g * x).exp())
                .with_bound(BoundParams {
                    m: nlip * y0.abs() * (nlip * x1).exp(),
                    nlip,
                    h: x1,
                });
            let mut table = Table::new(vec!["n", "y_n_final", "error", "bound"]);
            for n in 0..=n_max {
                let bound = if nlip > 0.0 { run.bound(n).map_or(Cell::Empty, Cell::Num) } else { Cell::Empty };
                table.push(vec![
                    Cell::Int(n as u64),
                    Cell::Num(run.final_value(n)),
                    Cell::Num(run.errors[n]),
                    bound,
                ]);
            }
            let violations = (1..=n_max)
                .filter(|&n| nlip > 0.0 && run.errors[n] > run.bound(n).unwrap_or(f64::INFINITY))
                .count();
            summary.set_f64("final_error", run.errors[n_max]);
            summary.set_f64("exact_final", y0 * (g * x1).exp());
            summary.set("bound_violations", violations);
            if violations > 0 {
                summary.warn(format!("{violations} iterates exceed the a-priori bound (quadrature error)"));
            }
            Ok((table, summary))
        }
        PicardParams::Delta { a, ref epsilons, x1, n_max, grid } => {
            let mut table = Table::new(vec!["epsilon", "n", "y_n_final", "direct"]);
            let mut corrections = Vec::with_capacity(epsilons.len());
            for &eps in epsilons {
                let rep = picard_delta_breakdown(a, eps, x1, n_max, grid)?;
                for (n, &v) in rep.final_values.iter().enumerate() {
                    table.push(vec![Cell::Num(eps), Cell::Int(n as u64), Cell::Num(v), Cell::Num(rep.direct)]);
                }
                corrections.push(serde_json::json!({
                    "epsilon": eps,
                    "second_correction": rep.second_correction,
                }));
            }
            if epsilons.len() >= 2 {
                let (small, large) = (epsilons[0].min(epsilons[1]), epsilons[0].max(epsilons[1]));
                let asym = asymmetric_second_correction(a, small, large, x1, grid)?;
                summary.set_f64("asymmetric_second_correction", asym);
            }
            summary.set("second_corrections", corrections);
            summary.set_f64("direct", if x1 >= a { 1f64.exp() } else { 1.0 });
            summary.warn("second iterate contains a delta times step product; its value depends on the smearing");
            Ok((table, summary))
        }
    }
}

fn counterexample(p: &CounterexampleParams) -> Result<(Table, Summary), CliError> {
    let mut summary = Summary::default();
    match p {
        CounterexampleParams::Dominated { n_list } => {
            let report = dominated_convergence_demos(n_list)?;
            let mut table = Table::new(vec![
                "n",
                "family1_integral",
                "family2_integral",
                "family2_tail",
                "family1_at_one",
                "family2_at_one",
            ]);
            for r in &report.rows {
                table.push(vec![
                    Cell::Int(u64::from(r.n)),
                    Cell::Num(r.family1_integral),
                    Cell::Num(r.family2_integral),
                    Cell::Num(r.family2_tail),
                    Cell::Num(r.family1_at_one),
                    Cell::Num(r.family2_at_one),
                ]);
            }
            summary.set_f64("pointwise_limit", report.pointwise_limit);
            Ok((table, summary))
        }
        CounterexampleParams::Smearing { pairs, smear, t1, t, panels } => {
            let kind = match smear {
                SmearKindConfig::Gaussian => SmearKind::Gaussian,
                SmearKindConfig::Nascent => SmearKind::Nascent,
            };
            let mut table = Table::new(vec!["eps1", "eps2", "value"]);
            let mut values = Vec::with_capacity(pairs.len());
            for &[e1, e2] in pairs {
                let v = smeared_second_order(e1, e2, kind, *t1, *t, *panels)?;
                values.push(v);
                table.push(vec![Cell::Num(e1), Cell::Num(e2), Cell::Num(v)]);
            }
            if !values.is_empty() {
                let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                summary.set_f64("spread", max - min);
            }
            Ok((table, summary))
        }
    }
}
