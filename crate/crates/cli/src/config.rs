//! Experiment configuration schema.
//!
//! Every object rejects unknown keys. A config is parsed in two passes: the
//! envelope first, then `params` against the struct for its `kind`, so a
//! schema error names the field that failed.

use std::path::{Path, PathBuf};

use num_complex::Complex;
use pitaron::hamiltonian::{hermitian_split, nhse_hamiltonian, pauli_matrix, HamiltonianSpec, Kick};
use pitaron::linalg::ComplexMatrix;
use pitaron::{CMatrix, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Evolve,
    Nhse,
    Comb,
    Dyson,
    Picard,
    Counterexample,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Evolve => "evolve",
            Kind::Nhse => "nhse",
            Kind::Comb => "comb",
            Kind::Dyson => "dyson",
            Kind::Picard => "picard",
            Kind::Counterexample => "counterexample",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: Kind,
    params: Value,
    output_path: String,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub params: Params,
    /// Raw `params` object, echoed into the summary.
    pub params_echo: Value,
    pub output_path: PathBuf,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum Params {
    Evolve(EvolveParams),
    Nhse(NhseParams),
    Comb(CombParams),
    Dyson(DysonParams),
    Picard(PicardParams),
    Counterexample(CounterexampleParams),
}

/// `[re, im]`.
pub type ComplexPair = [f64; 2];
/// Row-major rows of complex entries.
pub type MatrixRows = Vec<Vec<ComplexPair>>;

/// `offset + amp · f(freq · t + phase)`, or a bare constant.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Profile {
    Constant(f64),
    Shaped(ShapedProfile),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapedProfile {
    #[serde(rename = "fn")]
    pub shape: Shape,
    #[serde(default = "one")]
    pub amp: f64,
    #[serde(default = "one")]
    pub freq: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Cos,
    Sin,
    Linear,
}

fn one() -> f64 {
    1.0
}

impl Profile {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Shaped(p) => {
                let arg = p.freq * t + p.phase;
                let f = match p.shape {
                    Shape::Cos => arg.cos(),
                    Shape::Sin => arg.sin(),
                    Shape::Linear => arg,
                };
                p.offset + p.amp * f
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Switch {
    pub time: f64,
    pub matrix: MatrixRows,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum HamiltonianConfig {
    Pauli { f1: Profile, f2: Profile, f3: Profile },
    Constant { matrix: MatrixRows },
    /// `H = h_part − i j_part`.
    Split { h_part: MatrixRows, j_part: MatrixRows },
    Piecewise { first: MatrixRows, switches: Vec<Switch> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KickConfig {
    pub time: f64,
    /// Multiplies the identity.
    pub strength: f64,
}

/// Reference state: explicit amplitudes, a basis index, or `"random"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StateConfig {
    Amplitudes(Vec<ComplexPair>),
    Basis(usize),
    Named(NamedState),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedState {
    Random,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveParams {
    pub hamiltonian: HamiltonianConfig,
    #[serde(default)]
    pub kicks: Vec<KickConfig>,
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    pub grid_points: usize,
    #[serde(default = "one_usize")]
    pub steps_per_cell: usize,
    #[serde(default)]
    pub psi0: Option<StateConfig>,
}

fn one_usize() -> usize {
    1
}

/// A single value applied to every bond, or one value per bond.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PerBond {
    Uniform(f64),
    List(Vec<f64>),
}

impl PerBond {
    pub fn expand(&self, bonds: usize) -> Vec<f64> {
        match self {
            PerBond::Uniform(v) => vec![*v; bonds],
            PerBond::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NhseParams {
    pub l: usize,
    #[serde(default)]
    pub energy: f64,
    pub hop: PerBond,
    pub gamma: PerBond,
    pub t1: f64,
    pub grid_points: usize,
    #[serde(default = "one_usize")]
    pub steps_per_cell: usize,
    #[serde(default)]
    pub boundary: Boundary,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombParams {
    pub strengths: Vec<f64>,
    pub times: Vec<f64>,
    pub t1: f64,
    pub grid_points: usize,
    #[serde(default = "one_usize")]
    pub dim: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DysonParams {
    pub hamiltonian: HamiltonianConfig,
    #[serde(default)]
    pub t0: f64,
    pub t_list: Vec<f64>,
    #[serde(default = "default_orders")]
    pub orders: Vec<usize>,
    #[serde(default = "default_panels")]
    pub panels: usize,
    /// Substeps of the stepped reference propagator.
    #[serde(default = "default_reference_steps")]
    pub reference_steps: usize,
}

fn default_orders() -> Vec<usize> {
    vec![1, 2]
}

fn default_panels() -> usize {
    64
}

fn default_reference_steps() -> usize {
    4000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase", deny_unknown_fields)]
pub enum PicardParams {
    /// `y′ = g y`, `y(0) = y0` on `[0, x1]`.
    Exponential {
        #[serde(default = "one")]
        g: f64,
        #[serde(default = "one")]
        y0: f64,
        x1: f64,
        n_max: usize,
        grid: usize,
    },
    /// `y′ = δ_ε(x − a) y`, `y(0) = 1` on `[0, x1]`.
    Delta {
        a: f64,
        epsilons: Vec<f64>,
        x1: f64,
        n_max: usize,
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmearKindConfig {
    Gaussian,
    Nascent,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "demo", rename_all = "lowercase", deny_unknown_fields)]
pub enum CounterexampleParams {
    Dominated {
        n_list: Vec<u32>,
    },
    Smearing {
        /// `[ε₁, ε₂]` pairs.
        pairs: Vec<[f64; 2]>,
        #[serde(default = "default_smear")]
        smear: SmearKindConfig,
        t1: f64,
        t: f64,
        panels: usize,
    },
}

fn default_smear() -> SmearKindConfig {
    SmearKindConfig::Gaussian
}

fn schema(context: &str, e: serde_json::Error) -> CliError {
    CliError::Config(format!("{context}: {e}"))
}

/// Rejects NaN/inf anywhere in a JSON tree. serde_json never produces them
/// from text, but configs built in code can.
fn check_finite(v: &Value, path: &str) -> Result<(), CliError> {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if x.is_finite() => Ok(()),
            _ => Err(CliError::Config(format!("{path}: number is not finite"))),
        },
        Value::Array(items) => items
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| check_finite(x, &format!("{path}[{i}]"))),
        Value::Object(map) => map.iter().try_for_each(|(k, x)| check_finite(x, &format!("{path}.{k}"))),
        _ => Ok(()),
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| schema("malformed JSON", e))?;
    check_finite(&raw, "$")?;
    let env: Envelope = serde_json::from_value(raw).map_err(|e| schema("config", e))?;
    if env.output_path.trim().is_empty() {
        return Err(CliError::Config("output_path must not be empty".into()));
    }
    let ctx = format!("params for kind '{}'", env.kind.as_str());
    let p = env.params.clone();
    let params = match env.kind {
        Kind::Evolve => Params::Evolve(serde_json::from_value(p).map_err(|e| schema(&ctx, e))?),
        Kind::Nhse => Params::Nhse(serde_json::from_value(p).map_err(|e| schema(&ctx, e))?),
        Kind::Comb => Params::Comb(serde_json::from_value(p).map_err(|e| schema(&ctx, e))?),
        Kind::Dyson => Params::Dyson(serde_json::from_value(p).map_err(|e| schema(&ctx, e))?),
        Kind::Picard => Params::Picard(serde_json::from_value(p).map_err(|e| schema(&ctx, e))?),
        Kind::Counterexample => Params::Counterexample(serde_json::from_value(p).map_err(|e| schema(&ctx, e))?),
    };
    Ok(ExperimentConfig {
        kind: env.kind,
        params,
        params_echo: env.params,
        output_path: PathBuf::from(env.output_path),
        seed: env.seed.unwrap_or(DEFAULT_SEED),
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn matrix_from_rows(rows: &MatrixRows, what: &str) -> Result<CMatrix, CliError> {
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

impl HamiltonianConfig {
    /// Builds the spec; also returns the commutator norm of the
    /// Hermitian/anti-Hermitian split for time-independent forms.
    pub fn build(&self, kicks: &[KickConfig]) -> Result<(HamiltonianSpec, Option<f64>), CliError> {
        let invalid = |e: pitaron::Error| CliError::Config(format!("hamiltonian: {e}"));
        let (spec, comm) = match self {
            HamiltonianConfig::Pauli { f1, f2, f3 } => {
                let (f1, f2, f3) = (f1.clone(), f2.clone(), f3.clone());
                let spec = HamiltonianSpec::from_fn(2, move |t| pauli_matrix(f1.eval(t), f2.eval(t), f3.eval(t)))
                    .map_err(invalid)?;
                (spec, None)
            }
            HamiltonianConfig::Constant { matrix } => {
                let h = matrix_from_rows(matrix, "hamiltonian.matrix")?;
                let comm = hermitian_split(&h).map_err(invalid)?.commutator_norm;
                (HamiltonianSpec::constant(h).map_err(invalid)?, Some(comm))
            }
            HamiltonianConfig::Split { h_part, j_part } => {
                let hp = matrix_from_rows(h_part, "hamiltonian.h_part")?;
                let jp = matrix_from_rows(j_part, "hamiltonian.j_part")?;
                if hp.dim() != jp.dim() {
                    return Err(CliError::Config("hamiltonian: h_part and j_part differ in size".into()));
                }
                let split = pitaron::Split::from_parts(hp, jp);
                let comm = split.commutator_norm;
                (HamiltonianSpec::constant(split.recombine()).map_err(invalid)?, Some(comm))
            }
            HamiltonianConfig::Piecewise { first, switches } => {
                let first = matrix_from_rows(first, "hamiltonian.first")?;
                let sw = switches
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Ok((s.time, matrix_from_rows(&s.matrix, &format!("hamiltonian.switches[{i}]"))?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                (HamiltonianSpec::piecewise_constant(first, sw).map_err(invalid)?, None)
            }
        };
        if kicks.is_empty() {
            return Ok((spec, comm));
        }
        let dim = spec.dim();
        let kicks = kicks
            .iter()
            .map(|k| Kick {
                time: k.time,
                strength: CMatrix::identity(dim).scale_real(k.strength),
            })
            .collect();
        Ok((spec.with_kicks(kicks).map_err(invalid)?, comm))
    }
}

impl NhseParams {
    pub fn matrix(&self) -> Result<CMatrix, CliError> {
        let bonds = self.l.saturating_sub(1);
        nhse_hamiltonian(self.l, self.energy, &self.hop.expand(bonds), &self.gamma.expand(bonds))
            .map_err(|e| CliError::Config(format!("nhse: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let top = r#"{"kind":"comb","params":{"strengths":[1],"times":[1],"t1":2,"grid_points":3},"output_path":"x","extra":1}"#;
        assert!(matches!(parse_config(top), Err(CliError::Config(_))));
        let inner = r#"{"kind":"comb","params":{"strengths":[1],"times":[1],"t1":2,"grid_points":3,"bogus":0},"output_path":"x"}"#;
        let err = parse_config(inner).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
        let nested = r#"{"kind":"evolve","params":{"hamiltonian":{"type":"constant","matrix":[[[1,0]]],"oops":1},"t1":1,"grid_points":2},"output_path":"x"}"#;
        assert!(parse_config(nested).is_err());
    }

    #[test]
    fn defaults_and_profiles() {
        let cfg = parse_config(
            r#"{"kind":"evolve","params":{"hamiltonian":{"type":"pauli","f1":{"fn":"cos"},"f2":{"fn":"sin"},"f3":0.5},"t1":2,"grid_points":5},"output_path":"out/p"}"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, DEFAULT_SEED);
        let Params::Evolve(p) = cfg.params else { panic!("wrong kind") };
        assert_eq!(p.steps_per_cell, 1);
        let HamiltonianConfig::Pauli { f1, f3, .. } = &p.hamiltonian else { panic!() };
        assert!((f1.eval(0.3) - 0.3f64.cos()).abs() < 1e-15);
        assert_eq!(f3.eval(7.0), 0.5);
    }

    #[test]
    fn bad_kind_and_missing_fields() {
        assert!(parse_config(r#"{"kind":"nope","params":{},"output_path":"x"}"#).is_err());
        assert!(parse_config(r#"{"kind":"comb","params":{},"output_path":"x"}"#).is_err());
        assert!(parse_config("{not json").is_err());
        assert!(parse_config(r#"{"kind":"comb","params":{"strengths":[],"times":[],"t1":1,"grid_points":2},"output_path":" "}"#).is_err());
    }
}
