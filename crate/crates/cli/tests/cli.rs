use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pitaron-lab"))
}

fn run(dir: &Path, configs: &[&str], extra: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.arg("run");
    for c in configs {
        cmd.arg(dir.join(c));
    }
    cmd.arg("--out").arg(dir.join("out")).args(extra);
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

/// Parses a CSV into its header and numeric rows; blank cells become NaN.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| {
            rec.unwrap()
                .iter()
                .map(|c| if c.is_empty() { f64::NAN } else { c.parse().unwrap() })
                .collect()
        })
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn summary(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const V: [f64; 4] = [0.6, 1.0, 1.2, 0.8];

const COMB: &str = r#"{"kind":"comb","params":{"strengths":[0.6,1.0,1.2,0.8],"times":[1,2,3,4],"t1":5,"grid_points":51},"output_path":"comb"}"#;

#[test]
fn comb_staircase_ends_at_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "comb.json", COMB);
    let out = run(dir.path(), &["comb.json"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let (header, rows) = read_csv(&dir.path().join("out/comb.csv"));
    assert_eq!(header, ["t", "defect_U", "defect_P", "n_distance", "z_factor", "n_trunc"]);
    let (t, nt) = (column(&header, "t"), column(&header, "n_trunc"));
    // 1 − S²/2 with S the strengths already passed.
    for row in &rows {
        let s: f64 = V.iter().enumerate().filter(|(i, _)| (i + 1) as f64 <= row[t] + 1e-12).map(|(_, v)| v).sum();
        assert!((row[nt] - (1.0 - 0.5 * s * s)).abs() < 1e-12, "t = {}", row[t]);
    }
    let last = rows.last().unwrap()[nt];
    assert!((last + 5.48).abs() < 1e-12, "{last}");
    // Scalar kicks are unitary.
    assert!(rows.iter().all(|r| r[column(&header, "defect_U")] < 1e-12));

    let s = summary(dir.path().join("out/comb.summary.json"));
    assert_eq!(s["kind"], "comb");
    assert_eq!(s["params"]["grid_points"], 51);
    assert_eq!(s["results"]["indefinite_count"], 4);
    assert_eq!(s["seed"], 42);
    assert!(s["wall_time_ms"].as_f64().unwrap() >= 0.0);
    assert_eq!(s["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn hermitian_pauli_evolution_keeps_n_trivial() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "pauli.json",
        r#"{"kind":"evolve","params":{"hamiltonian":{"type":"pauli","f1":{"fn":"cos","amp":0.8,"freq":1.3},"f2":{"fn":"sin","freq":0.7},"f3":-0.4},"t1":8,"grid_points":81,"steps_per_cell":10,"psi0":"random"},"output_path":"pauli"}"#,
    );
    let out = run(dir.path(), &["pauli.json"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("out/pauli.csv"));
    assert_eq!(header, ["t", "defect_U", "defect_P", "n_distance", "z_factor"]);
    let nd = column(&header, "n_distance");
    let max = rows.iter().map(|r| r[nd]).fold(0.0, f64::max);
    assert!(max <= 1e-8, "{max}");
    let z = column(&header, "z_factor");
    assert!(rows.iter().all(|r| (r[z] - 1.0).abs() < 1e-12));
}

#[test]
fn nhse_pitaron_stays_unitary_while_u_does_not() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "n.json",
        r#"{"kind":"nhse","params":{"l":2,"hop":1.0,"gamma":0.5,"t1":3,"grid_points":31,"steps_per_cell":2},"output_path":"n"}"#,
    );
    assert_eq!(run(dir.path(), &["n.json"], &[]).status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("out/n.csv"));
    let (du, dp) = (column(&header, "defect_U"), column(&header, "defect_P"));
    assert!(rows.iter().all(|r| r[dp] <= 1e-10));
    assert!(rows.last().unwrap()[du] > 0.1);
    let s = summary(dir.path().join("out/n.summary.json"));
    // The two-site split has non-commuting parts.
    assert!(s["results"]["commutator_norm"].as_f64().unwrap() > 0.0);
    assert!(!s["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn dyson_table_columns_and_slopes() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "d.json",
        r#"{"kind":"dyson","params":{"hamiltonian":{"type":"constant","matrix":[[[0.3,0],[0,-0.5]],[[0,0.5],[-0.2,0]]]},"t_list":[0.01,0.03,0.1],"orders":[1,2,3],"panels":16},"output_path":"d"}"#,
    );
    let out = run(dir.path(), &["d.json"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("out/d.csv"));
    assert_eq!(header, ["T", "order", "err_partial", "defect_partial", "err_pitaron_expansion"]);
    assert_eq!(rows.len(), 9);
    let (ord, pe) = (column(&header, "order"), column(&header, "err_pitaron_expansion"));
    assert!(rows.iter().filter(|r| r[ord] == 3.0).all(|r| r[pe].is_nan()));
    let s = summary(dir.path().join("out/d.summary.json"));
    for k in 1..=3 {
        let slope = s["results"][format!("slope_order_{k}")].as_f64().unwrap();
        assert!((slope - (k + 1) as f64).abs() < 0.1, "order {k}: {slope}");
    }
}

#[test]
fn malformed_json_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"kind":"comb","params":{"strengths":[0.6"#);
    let out = run(dir.path(), &["bad.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "u.json",
        r#"{"kind":"comb","params":{"strengths":[1],"times":[1],"t1":2,"grid_points":3,"tolerance":1e-9},"output_path":"u"}"#,
    );
    let out = run(dir.path(), &["u.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance"));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn ill_conditioned_run_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "ill.json",
        r#"{"kind":"nhse","params":{"l":8,"hop":1.0,"gamma":0.99,"t1":60,"grid_points":61},"output_path":"ill"}"#,
    );
    let out = run(dir.path(), &["ill.json"], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ill-conditioned"));
    assert!(!dir.path().join("out/ill.csv").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "comb.json", COMB);
    write(
        dir.path(),
        "r.json",
        r#"{"kind":"evolve","params":{"hamiltonian":{"type":"split","h_part":[[[1,0],[0,0]],[[0,0],[-1,0]]],"j_part":[[[0.2,0],[0.3,0]],[[0.3,0],[0,0]]]},"t1":1,"grid_points":11,"psi0":"random"},"output_path":"r","seed":7}"#,
    );
    let mut first = Vec::new();
    for round in 0..2 {
        let out = run(dir.path(), &["comb.json", "r.json"], &["--jobs", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let bytes: Vec<Vec<u8>> = ["comb.csv", "r.csv"]
            .iter()
            .map(|f| std::fs::read(dir.path().join("out").join(f)).unwrap())
            .collect();
        if round == 0 {
            first = bytes;
        } else {
            assert_eq!(first, bytes);
        }
    }
}

#[test]
fn seed_changes_random_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = |seed: u64, name: &str| {
        format!(
            r#"{{"kind":"evolve","params":{{"hamiltonian":{{"type":"constant","matrix":[[[0,-0.4],[1,0]],[[0,0],[0,0.2]]]}},"t1":1,"grid_points":3,"psi0":"random"}},"output_path":"{name}","seed":{seed}}}"#
        )
    };
    write(dir.path(), "a.json", &cfg(1, "a"));
    write(dir.path(), "b.json", &cfg(2, "b"));
    assert_eq!(run(dir.path(), &["a.json", "b.json"], &[]).status.code(), Some(0));
    let a = std::fs::read(dir.path().join("out/a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("out/b.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn mixed_batch_reports_worst_code() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "comb.json", COMB);
    write(dir.path(), "bad.json", "not json");
    let out = run(dir.path(), &["comb.json", "bad.json"], &["--jobs", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("out/comb.csv").exists());
}

#[test]
fn builtin_demos_run() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["dimb", "nhse2", "picard-exp", "dominated"] {
        let out = bin().args(["demo", name, "--out"]).arg(dir.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.path().join(format!("{name}.csv")).exists());
    }
    let (header, rows) = read_csv(&dir.path().join("picard-exp.csv"));
    let (err, bound) = (column(&header, "error"), column(&header, "bound"));
    assert!(rows.iter().skip(1).all(|r| r[err] <= r[bound]));
    // Demo configs print as valid JSON that `run` accepts.
    let printed = bin().args(["demo", "dimb", "--print-config"]).output().unwrap();
    let cfg: Value = serde_json::from_slice(&printed.stdout).unwrap();
    assert_eq!(cfg["kind"], "comb");
}
