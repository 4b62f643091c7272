//! Input files and built-in instances.
//!
//! One JSON document describes one of: a subspace (`{"n", "states"}`), a
//! parity embedding (`{"logical", "qubit_map"?, "degeneracy"?}`), a minor
//! embedding (`{"chains"}`), or an annealing instance, which is a parity
//! embedding plus fields and constraints:
//!
//! ```json
//! {
//!   "name": "k5",
//!   "parity": {"logical": {"vertices": [0, 1, 2, 3, 4]}, "qubit_map": {"1": [2, 3], "...": []}},
//!   "fields": [0.58, -0.5],
//!   "constraints": [[1, 2, 5], [5, 6, 8]],
//!   "penalty": 4.0,
//!   "t_final": 100.0
//! }
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::embeddings::{MinorEmbedding, ParityEmbedding};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeSubset, Hypergraph};
use crate::sim::{AnnealSpec, Constraint, ConstraintSign, ProblemHamiltonian, Schedule};
use crate::subspace::Subspace;

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Subspace(Subspace),
    Parity(ParityEmbedding),
    Minor(MinorEmbedding),
    Anneal(Box<AnnealInstance>),
}

impl Instance {
    /// Parses an instance, choosing the kind from the top-level keys.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::input(format!("invalid JSON: {e}")))?;
        let Value::Object(map) = &value else {
            return Err(Error::input("instance must be a JSON object"));
        };
        let parse_err = |kind: &str, e: serde_json::Error| Error::input(format!("invalid {kind} instance: {e}"));
        if map.contains_key("fields") {
            let inst: AnnealInstance = serde_json::from_value(value).map_err(|e| parse_err("annealing", e))?;
            inst.validate()?;
            Ok(Instance::Anneal(Box::new(inst)))
        } else if map.contains_key("states") {
            serde_json::from_value(value).map(Instance::Subspace).map_err(|e| parse_err("subspace", e))
        } else if map.contains_key("chains") {
            serde_json::from_value(value).map(Instance::Minor).map_err(|e| parse_err("minor", e))
        } else if map.contains_key("logical") {
            serde_json::from_value(value).map(Instance::Parity).map_err(|e| parse_err("parity", e))
        } else {
            Err(Error::input("unrecognized instance: expected one of the keys states, logical, chains, fields"))
        }
    }

    /// The parity embedding, if this instance has one.
    pub fn parity(&self) -> Option<&ParityEmbedding> {
        match self {
            Instance::Parity(p) => Some(p),
            Instance::Anneal(a) => Some(&a.parity),
            _ => None,
        }
    }
}

/// A parity embedding with the fields and constraints of its annealing
/// Hamiltonian. Constraint entries are 1-based physical qubit lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub parity: ParityEmbedding,
    pub fields: Vec<f64>,
    pub constraints: Vec<Vec<usize>>,
    #[serde(default = "default_penalty")]
    pub penalty: f64,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// `flipped` makes violated constraints the low-energy side.
    #[serde(default, skip_serializing_if = "is_favored")]
    pub constraint_sign: ConstraintSign,
}

fn is_favored(sign: &ConstraintSign) -> bool {
    *sign == ConstraintSign::Favored
}

fn default_penalty() -> f64 {
    4.0
}

fn default_t_final() -> f64 {
    100.0
}

fn default_samples() -> usize {
    101
}

impl AnnealInstance {
    /// Checks sizes, and that the constraints are parity constraints of the
    /// logical hypergraph spanning its whole constraint space, so the
    /// constraint minima are exactly the parity states.
    pub fn validate(&self) -> Result<()> {
        let np = self.parity.num_physical();
        if self.fields.len() != np {
            return Err(Error::DimensionMismatch {
                expected: np,
                actual: self.fields.len(),
                context: "one field per physical qubit",
            });
        }
        let subsets = self.constraint_subsets()?;
        let logical = self.parity.logical();
        if let Some(k) = subsets.iter().position(|c| !logical.is_constraint(c)) {
            return Err(Error::input(format!("constraint {} is not a parity constraint of the embedding", k + 1)));
        }
        if !logical.spans_constraint_space(&subsets) {
            return Err(Error::input(format!(
                "constraints span a space of smaller dimension than the {} required",
                logical.constraint_space_dim()
            )));
        }
        if !(self.penalty.is_finite() && self.penalty >= 0.0) {
            return Err(Error::input("penalty must be finite and >= 0"));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::input("t_final must be positive"));
        }
        if self.samples < 2 {
            return Err(Error::input("samples must be at least 2"));
        }
        self.problem(None)?;
        Ok(())
    }

    fn constraint_subsets(&self) -> Result<Vec<EdgeSubset>> {
        let np = self.parity.num_physical();
        self.constraints
            .iter()
            .map(|c| {
                if let Some(&q) = c.iter().find(|&&q| q == 0 || q > np) {
                    return Err(Error::input(format!("constraint qubit {q} outside 1..={np}")));
                }
                Ok(EdgeSubset::from_indices(np, c.iter().map(|q| q - 1)))
            })
            .collect()
    }

    /// `H_p` with every constraint at strength `penalty` (or the instance
    /// default).
    pub fn problem(&self, penalty: Option<f64>) -> Result<ProblemHamiltonian> {
        let c = penalty.unwrap_or(self.penalty);
        Ok(ProblemHamiltonian::new(
            self.fields.clone(),
            self.constraints.iter().map(|q| Constraint { qubits: q.clone(), strength: c }).collect(),
        )?
        .with_sign(self.constraint_sign))
    }

    /// Linear anneal with optional overrides.
    pub fn anneal_spec(&self, t_final: Option<f64>, dt: Option<f64>, penalty: Option<f64>) -> Result<AnnealSpec> {
        let mut spec =
            AnnealSpec::new(self.problem(penalty)?, Schedule::Linear { t_final: t_final.unwrap_or(self.t_final) });
        spec.dt = dt.or(self.dt);
        spec.validate()?;
        Ok(spec)
    }

    /// `samples` evenly spaced times from 0 to `t_final`.
    pub fn sample_times(t_final: f64, samples: usize) -> Vec<f64> {
        let last = samples.max(2) - 1;
        (0..=last).map(|k| if k == last { t_final } else { t_final * k as f64 / last as f64 }).collect()
    }
}

/// The three-state, three-qubit subspace `{000, 100, 111}`.
pub fn worked_example() -> Subspace {
    Subspace::from_strs(&["000", "100", "111"]).expect("valid states")
}

/// Physical qubit `m` (1-based) sits on logical edge `K5_QUBIT_EDGES[m-1]`.
pub const K5_QUBIT_EDGES: [[u32; 2]; 10] =
    [[2, 3], [1, 3], [0, 3], [3, 4], [1, 2], [0, 2], [2, 4], [0, 1], [1, 4], [0, 4]];

pub const K5_FIELDS: [f64; 10] = [0.58, -0.5, -0.3, -0.2, 0.41, -0.53, 0.48, -0.31, -0.19, 0.39];

/// Three- and four-body constraints on 1-based physical qubits.
pub const K5_CONSTRAINTS: [&[usize]; 6] =
    [&[1, 2, 5], &[5, 6, 8], &[8, 9, 10], &[2, 3, 5, 6], &[3, 4, 6, 7], &[6, 7, 8, 9]];

/// Parity embedding of `K5` on vertices `0..=4` with the physical qubit
/// order of [`K5_QUBIT_EDGES`].
pub fn k5_parity() -> ParityEmbedding {
    ParityEmbedding::from_qubit_map((0..5).collect(), K5_QUBIT_EDGES.iter().map(|e| e.to_vec()).collect())
        .expect("valid K5 map")
}

/// The ten-qubit `K5` annealing instance (penalty 4, `t_final` 100).
pub fn k5_instance() -> AnnealInstance {
    AnnealInstance {
        name: Some("k5".into()),
        parity: k5_parity(),
        fields: K5_FIELDS.to_vec(),
        constraints: K5_CONSTRAINTS.iter().map(|c| c.to_vec()).collect(),
        penalty: default_penalty(),
        t_final: default_t_final(),
        dt: None,
        samples: default_samples(),
        constraint_sign: ConstraintSign::Favored,
    }
}

/// Parity embedding of the complete graph on `n` vertices, edges in
/// lexicographic order.
pub fn complete_parity(n: u32) -> ParityEmbedding {
    ParityEmbedding::new(Hypergraph::complete(n))
}
