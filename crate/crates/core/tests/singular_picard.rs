use pitaron::picard::{picard_delta_breakdown, picard_iterate, BoundParams};
use pitaron::singular::{
    comb_expansion_terms, comb_pitaron_expansion, comb_truncated_norm, smeared_second_order, SmearKind,
    SmearedDelta,
};

const V: [f64; 4] = [0.6, 1.0, 1.2, 0.8];
const T: [f64; 4] = [1.0, 2.0, 3.0, 4.0];

#[test]
fn pitaron_real_part_is_truncated_norm() {
    for k in 0..=60 {
        let t = 0.1 * k as f64;
        let (re, im) = comb_pitaron_expansion(&V, &T, t).unwrap();
        assert_eq!(re, comb_truncated_norm(&V, &T, t).unwrap());
        assert_eq!(im, -comb_expansion_terms(&V, &T, t).unwrap().cumulative_strength);
    }
}

#[test]
fn staircase_jumps() {
    let mut s_prev = 0.0;
    for (i, (&ti, &vi)) in T.iter().zip(&V).enumerate() {
        let before = comb_truncated_norm(&V, &T, ti - 1e-9).unwrap();
        let at = comb_truncated_norm(&V, &T, ti).unwrap();
        let s = s_prev + vi;
        assert!(((at - before) + 0.5 * (s * s - s_prev * s_prev)).abs() < 1e-12, "kick {i}");
        // Constant between kicks.
        assert_eq!(at, comb_truncated_norm(&V, &T, ti + 0.5).unwrap());
        s_prev = s;
    }
}

#[test]
fn flags_only_for_kicks_inside_interval() {
    for (t, expected) in [(0.5, 0), (1.0, 1), (2.5, 2), (4.0, 4), (9.0, 4)] {
        assert_eq!(comb_expansion_terms(&V, &T, t).unwrap().indefinite_count(), expected);
    }
    // Kicks at or before zero fall outside (0, t].
    let early = comb_expansion_terms(&[1.0, 2.0], &[-1.0, 0.0], 3.0).unwrap();
    assert_eq!(early.indefinite_count(), 0);
}

#[test]
fn symmetric_smearing_tends_to_half() {
    let values: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&e| smeared_second_order(e, e, SmearKind::Gaussian, 1.0, 2.0, 40_000).unwrap())
        .collect();
    let gaps: Vec<f64> = values.iter().map(|v| (v - 0.5).abs()).collect();
    assert!(gaps[2] < 1e-6, "{values:?}");
    assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{values:?}");
    let nascent = smeared_second_order(1e-3, 1e-3, SmearKind::Nascent, 1.0, 2.0, 40_000).unwrap();
    assert!((nascent - 0.5).abs() < 0.02, "{nascent}");
}

#[test]
fn nascent_mass_needs_wide_window() {
    let d = SmearedDelta::new(SmearKind::Nascent, 1e-3, 0.0).unwrap();
    let (lo, hi) = d.window();
    assert!(hi - lo > 1e3);
    assert!((d.mass(2_000) - 1.0).abs() < 1e-6);
}

#[test]
fn scaled_exponential_converges() {
    let g = 1.5;
    let run = picard_iterate(|_, y| g * y, 1.0, 0.0, 1.0, 14, 20_001)
        .unwrap()
        .with_reference(|x| (g * x).exp())
        .with_bound(BoundParams {
            m: g * g.exp(),
            nlip: g,
            h: 1.0,
        });
    for n in 1..=12 {
        assert!(run.errors[n] <= run.bound(n).unwrap(), "n = {n}");
    }
    assert!(run.errors[14] < 1e-7);
    assert!(run.errors.windows(2).take(12).all(|w| w[1] < w[0]));
}

#[test]
fn delta_breakdown_over_decreasing_widths() {
    for eps in [1e-1, 1e-2, 1e-3] {
        let rep = picard_delta_breakdown(1.0, eps, 2.0, 4, 40_001).unwrap();
        assert!((rep.second_correction - 0.5).abs() < 0.05, "{eps}: {}", rep.second_correction);
        // Iterates sum the Taylor series of e at the symmetric value, not e^{Θ}.
        assert!(rep.final_values[4] < rep.direct);
    }
    assert!(picard_delta_breakdown(1.0, 1e-6, 2.0, 2, 1_000).is_err());
}
