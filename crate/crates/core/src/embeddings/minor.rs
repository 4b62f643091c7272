//! Minor embedding: each logical vertex is a chain of physical qubits that
//! must all agree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::operators::{bipartite_sets_equal, OperatorSet, ProductOperator};
use super::parity::MAX_LOGICAL_VERTICES;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix};
use crate::subspace::{classify_by_key, BasisState, Classification, Subspace, Subsystem};

#[derive(Serialize, Deserialize)]
struct MinorRepr {
    /// Logical vertex id to 1-based physical qubit indices.
    chains: BTreeMap<u32, Vec<usize>>,
}

/// Chains `C_v` of physical qubits, one per logical vertex. Logical vertices
/// are ordered by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MinorRepr", into = "MinorRepr")]
pub struct MinorEmbedding {
    vertices: Vec<u32>,
    /// 0-based physical positions per vertex, in chain order.
    chains: Vec<Vec<usize>>,
    supports: Gf2Matrix,
}

impl TryFrom<MinorRepr> for MinorEmbedding {
    type Error = Error;

    fn try_from(r: MinorRepr) -> Result<Self> {
        let (vertices, chains): (Vec<u32>, Vec<Vec<usize>>) = r
            .chains
            .into_iter()
            .map(|(v, c)| {
                if c.contains(&0) {
                    return Err(Error::input(format!("chain of vertex {v} uses index 0; indices are 1-based")));
                }
                Ok((v, c.into_iter().map(|q| q - 1).collect()))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        MinorEmbedding::new(vertices, chains)
    }
}

impl From<MinorEmbedding> for MinorRepr {
    fn from(m: MinorEmbedding) -> Self {
        MinorRepr {
            chains: m
                .vertices
                .into_iter()
                .zip(m.chains)
                .map(|(v, c)| (v, c.into_iter().map(|q| q + 1).collect()))
                .collect(),
        }
    }
}

impl MinorEmbedding {
    /// `chains[k]` lists the 0-based physical positions of `vertices[k]`.
    /// Chains must be non-empty and partition `0..N`.
    pub fn new(vertices: Vec<u32>, chains: Vec<Vec<usize>>) -> Result<Self> {
        if vertices.len() != chains.len() {
            return Err(Error::DimensionMismatch {
                expected: vertices.len(),
                actual: chains.len(),
                context: "one chain per logical vertex",
            });
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(Error::input("duplicate logical vertex"));
        }
        let n: usize = chains.iter().map(Vec::len).sum();
        let mut owner = vec![usize::MAX; n];
        for (k, chain) in chains.iter().enumerate() {
            if chain.is_empty() {
                return Err(Error::input(format!("chain of vertex {} is empty", vertices[k])));
            }
            for &q in chain {
                if q >= n {
                    return Err(Error::input(format!("physical index {} outside 1..={n}", q + 1)));
                }
                if owner[q] != usize::MAX {
                    return Err(Error::input(format!("physical index {} in two chains", q + 1)));
                }
                owner[q] = k;
            }
        }
        let rows = owner.iter().map(|&k| BitVector::unit(vertices.len(), k)).collect();
        let supports = Gf2Matrix::from_rows(vertices.len(), rows)?;
        Ok(MinorEmbedding { vertices, chains, supports })
    }

    /// Vertices `0..k` with consecutive chains of the given sizes, so the
    /// physical order is the concatenation of chains.
    pub fn from_chain_sizes(sizes: &[usize]) -> Result<Self> {
        let mut next = 0;
        let chains = sizes
            .iter()
            .map(|&s| {
                let c: Vec<usize> = (next..next + s).collect();
                next += s;
                c
            })
            .collect();
        MinorEmbedding::new((0..sizes.len() as u32).collect(), chains)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Chain of the vertex at `position`, as 0-based physical positions.
    pub fn chain(&self, position: usize) -> &[usize] {
        &self.chains[position]
    }

    pub fn num_logical(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_physical(&self) -> usize {
        self.supports.rows()
    }

    pub fn supports(&self) -> &Gf2Matrix {
        &self.supports
    }

    fn position(&self, v: u32) -> Result<usize> {
        self.vertices.iter().position(|&x| x == v).ok_or(Error::UnknownVertex(v))
    }

    /// `Γ_v`: flips every qubit of the chain of `v`.
    pub fn chain_operator(&self, v: u32) -> Result<ProductOperator> {
        Ok(ProductOperator::single(self.num_logical(), self.position(v)?))
    }

    pub fn chain_operators(&self) -> Vec<ProductOperator> {
        (0..self.num_logical()).map(|p| ProductOperator::single(self.num_logical(), p)).collect()
    }

    pub fn flip_mask(&self, op: &ProductOperator) -> BitVector {
        op.flip_mask(&self.supports)
    }

    pub fn apply(&self, op: &ProductOperator, s: &BasisState) -> Result<BasisState> {
        if s.n() != self.num_physical() {
            return Err(Error::DimensionMismatch {
                expected: self.num_physical(),
                actual: s.n(),
                context: "minor state length",
            });
        }
        Ok(BasisState(s.0.xor(&self.flip_mask(op))))
    }

    /// `ℳ`: every physical state constant on each chain, ordered by the
    /// logical weight counter (bit `j` is vertex position `j`).
    pub fn enumerate_states(&self) -> Result<Subspace> {
        let nl = self.num_logical();
        if nl > MAX_LOGICAL_VERTICES {
            return Err(Error::Resource { what: "logical vertex count", value: nl, limit: MAX_LOGICAL_VERTICES });
        }
        let states = (0u64..1 << nl)
            .map(|f| Ok(BasisState(self.supports.mul_vec(&BitVector::from_u64(nl, f))?)))
            .collect::<Result<Vec<_>>>()?;
        Subspace::new(self.num_physical(), states)
    }

    /// `O_A = 𝒢({Γ_w : C_w ∩ A = ∅})`.
    pub fn operator_set(&self, a: &Subsystem) -> OperatorSet {
        let nl = self.num_logical();
        let gens = (0..nl)
            .filter(|&k| self.chains[k].iter().all(|&q| !a.mask().get(q)))
            .map(|k| BitVector::unit(nl, k))
            .collect();
        OperatorSet::new(nl, gens, &[])
    }

    pub fn equivalent(&self, a1: &Subsystem, a2: &Subsystem) -> bool {
        bipartite_sets_equal(
            &self.operator_set(a1),
            &self.operator_set(&a1.complement()),
            &self.operator_set(a2),
            &self.operator_set(&a2.complement()),
        )
    }

    pub fn classify(&self) -> Result<Classification> {
        let n = self.num_physical();
        classify_by_key(n, |mask| self.operator_set(&Subsystem::from_u64(n, mask)).canonical_basis())
    }
}

pub fn enumerate_minor_states(me: &MinorEmbedding) -> Result<Subspace> {
    me.enumerate_states()
}

pub fn minor_operator_set(me: &MinorEmbedding, a: &Subsystem) -> OperatorSet {
    me.operator_set(a)
}

pub fn minor_equivalent(me: &MinorEmbedding, a1: &Subsystem, a2: &Subsystem) -> bool {
    me.equivalent(a1, a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::subsystems_equivalent;

    #[test]
    fn two_one_chains() {
        let me = MinorEmbedding::from_chain_sizes(&[2, 1]).unwrap();
        let r = me.enumerate_states().unwrap();
        let mut got: Vec<String> = r.states().iter().map(|s| s.bits().to_string()).collect();
        got.sort();
        assert_eq!(got, ["000", "001", "110", "111"]);
        let g = me.chain_operator(0).unwrap();
        assert_eq!(me.apply(&g, &BasisState::parse("110").unwrap()).unwrap().bits().to_string(), "000");
    }

    #[test]
    fn single_chain() {
        let me = MinorEmbedding::from_chain_sizes(&[3]).unwrap();
        let got: Vec<String> = me.enumerate_states().unwrap().states().iter().map(|s| s.bits().to_string()).collect();
        assert_eq!(got, ["000", "111"]);
    }

    #[test]
    fn partial_chain_and_transversal() {
        let me = MinorEmbedding::from_chain_sizes(&[3, 2, 1]).unwrap();
        let a = Subsystem::from_qubits(6, &[1, 2]).unwrap();
        let o = me.operator_set(&a);
        assert_eq!(
            o.canonical_basis(),
            vec![BitVector::parse_bits("010").unwrap(), BitVector::parse_bits("001").unwrap()]
        );
        assert_eq!(me.operator_set(&a.complement()).operator_count(), 1);
        let t = Subsystem::from_qubits(6, &[1, 4, 6]).unwrap();
        assert_eq!(me.operator_set(&t).operator_count(), 1);
        // The length-one chain lies entirely inside `t`.
        assert_eq!(me.operator_set(&t.complement()).operator_count(), 2);
        let pairs = MinorEmbedding::from_chain_sizes(&[2, 2, 2]).unwrap();
        let t = Subsystem::from_qubits(6, &[1, 3, 5]).unwrap();
        assert_eq!(pairs.operator_set(&t).operator_count(), 1);
        assert_eq!(pairs.operator_set(&t.complement()).operator_count(), 1);
        assert_eq!(me.operator_set(&Subsystem::empty(6)).operator_count(), 8);
    }

    #[test]
    fn matches_quotient_oracle() {
        let me = MinorEmbedding::from_chain_sizes(&[2, 2, 1]).unwrap();
        let r = me.enumerate_states().unwrap();
        for m1 in 0u64..32 {
            for m2 in 0u64..32 {
                let a1 = Subsystem::from_u64(5, m1);
                let a2 = Subsystem::from_u64(5, m2);
                assert_eq!(me.equivalent(&a1, &a2), subsystems_equivalent(&r, &a1, &a2));
            }
        }
    }

    #[test]
    fn json_chains_are_one_based() {
        let me: MinorEmbedding = serde_json::from_str(r#"{"chains":{"7":[3,1],"2":[2]}}"#).unwrap();
        assert_eq!(me.vertices(), &[2, 7]);
        assert_eq!(me.chain(1), &[2, 0]);
        assert_eq!(serde_json::to_string(&me).unwrap(), r#"{"chains":{"2":[2],"7":[3,1]}}"#);
        assert!(serde_json::from_str::<MinorEmbedding>(r#"{"chains":{"1":[1],"2":[1]}}"#).is_err());
        assert!(serde_json::from_str::<MinorEmbedding>(r#"{"chains":{"1":[0]}}"#).is_err());
        assert!(serde_json::from_str::<MinorEmbedding>(r#"{"chains":{"1":[3]}}"#).is_err());
    }
}
