//! Built-in configurations for `pitaron-lab demo <name>`.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// Four-kick scalar Dirac comb with strengths 0.6, 1, 1.2, 0.8.
    Dimb,
    /// Two-site non-Hermitian lattice `[[0, 0.5], [1.5, 0]]`.
    Nhse2,
    /// Hermitian Pauli Hamiltonian with smooth profiles.
    Pauli,
    /// Picard iterates for `y′ = y` on `[0, 1]`.
    PicardExp,
    /// Nested integral of two smeared deltas for several width pairs.
    Smearing,
    /// Limit/integral exchange counterexamples.
    Dominated,
}

impl Demo {
    pub fn name(self) -> &'static str {
        match self {
            Demo::Dimb => "dimb",
            Demo::Nhse2 => "nhse2",
            Demo::Pauli => "pauli",
            Demo::PicardExp => "picard-exp",
            Demo::Smearing => "smearing",
            Demo::Dominated => "dominated",
        }
    }

    pub fn config(self) -> &'static str {
        match self {
            Demo::Dimb => DIMB,
            Demo::Nhse2 => NHSE2,
            Demo::Pauli => PAULI,
            Demo::PicardExp => PICARD_EXP,
            Demo::Smearing => SMEARING,
            Demo::Dominated => DOMINATED,
        }
    }
}

const DIMB: &str = r#"{
  "kind": "comb",
  "params": {
    "strengths": [0.6, 1.0, 1.2, 0.8],
    "times": [1.0, 2.0, 3.0, 4.0],
    "t1": 5.0,
    "grid_points": 51
  },
  "output_path": "dimb"
}"#;

const NHSE2: &str = r#"{
  "kind": "nhse",
  "params": {
    "l": 2,
    "hop": 1.0,
    "gamma": 0.5,
    "t1": 5.0,
    "grid_points": 101,
    "steps_per_cell": 4
  },
  "output_path": "nhse2"
}"#;

const PAULI: &str = r#"{
  "kind": "evolve",
  "params": {
    "hamiltonian": {
      "type": "pauli",
      "f1": {"fn": "cos", "amp": 0.8, "freq": 1.3},
      "f2": {"fn": "sin", "amp": 0.5, "freq": 0.7},
      "f3": -0.4
    },
    "t1": 10.0,
    "grid_points": 201,
    "steps_per_cell": 20,
    "psi0": "random"
  },
  "output_path": "pauli"
}"#;

const PICARD_EXP: &str = r#"{
  "kind": "picard",
  "params": {
    "problem": "exponential",
    "x1": 1.0,
    "n_max": 12,
    "grid": 20001
  },
  "output_path": "picard-exp"
}"#;

const SMEARING: &str = r#"{
  "kind": "counterexample",
  "params": {
    "demo": "smearing",
    "pairs": [[0.1, 0.1], [0.01, 0.01], [0.001, 0.001], [0.001, 0.1], [0.1, 0.001]],
    "t1": 1.0,
    "t": 2.0,
    "panels": 40000
  },
  "output_path": "smearing"
}"#;

const DOMINATED: &str = r#"{
  "kind": "counterexample",
  "params": {
    "demo": "dominated",
    "n_list": [1, 5, 10, 50, 100]
  },
  "output_path": "dominated"
}"#;
