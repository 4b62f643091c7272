//! Parity embedding: one physical qubit per hyperedge of the logical problem.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::operators::{bipartite_sets_equal, OperatorSet, ProductOperator};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix};
use crate::hypergraph::{EdgeSubset, Hypergraph};
use crate::subspace::{classify_by_key, BasisState, Classification, Subspace, Subsystem};

/// Largest logical vertex count for which states are enumerated.
pub const MAX_LOGICAL_VERTICES: usize = 22;

#[derive(Serialize, Deserialize)]
struct ParityRepr {
    logical: Hypergraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qubit_map: Option<BTreeMap<usize, Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degeneracy: Option<usize>,
}

/// A logical hypergraph whose edges, in order, are physical qubits `1..=|E|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ParityRepr", into = "ParityRepr")]
pub struct ParityEmbedding {
    logical: Hypergraph,
    degeneracy: usize,
    supports: Gf2Matrix,
    kernel: Vec<BitVector>,
}

impl TryFrom<ParityRepr> for ParityEmbedding {
    type Error = Error;

    fn try_from(r: ParityRepr) -> Result<Self> {
        let logical = match r.qubit_map {
            None => r.logical,
            Some(map) => {
                let expected: Vec<usize> = (1..=map.len()).collect();
                if map.keys().copied().collect::<Vec<_>>() != expected {
                    return Err(Error::input("qubit_map keys must be 1..=N without gaps"));
                }
                let edges: Vec<Vec<u32>> = map.into_values().collect();
                let h = Hypergraph::new(r.logical.vertices().to_vec(), edges)?;
                if r.logical.num_edges() > 0 {
                    // Listed edges must be exactly the mapped ones.
                    if r.logical.num_edges() != h.num_edges() {
                        return Err(Error::input("qubit_map and logical edge list differ in size"));
                    }
                    for e in 0..r.logical.num_edges() {
                        h.edge_position(&r.logical.edge_ids(e))?;
                    }
                }
                h
            }
        };
        match r.degeneracy {
            Some(d) => Ok(ParityEmbedding::with_degeneracy(logical, d)),
            None => Ok(ParityEmbedding::new(logical)),
        }
    }
}

impl From<ParityEmbedding> for ParityRepr {
    fn from(p: ParityEmbedding) -> Self {
        ParityRepr { logical: p.logical, qubit_map: None, degeneracy: Some(p.degeneracy) }
    }
}

impl ParityEmbedding {
    /// Degeneracy defaults to the dimension of the representation kernel.
    pub fn new(logical: Hypergraph) -> Self {
        let kernel = logical.representation_kernel();
        let d = kernel.len();
        Self::build(logical, d, kernel)
    }

    pub fn with_degeneracy(logical: Hypergraph, degeneracy: usize) -> Self {
        let kernel = logical.representation_kernel();
        Self::build(logical, degeneracy, kernel)
    }

    fn build(logical: Hypergraph, degeneracy: usize, kernel: Vec<BitVector>) -> Self {
        let supports = logical.incidence_matrix();
        ParityEmbedding { logical, degeneracy, supports, kernel }
    }

    /// Builds the embedding from an explicit physical-qubit list: entry `m`
    /// is the logical edge of qubit `m + 1`.
    pub fn from_qubit_map(vertices: Vec<u32>, qubit_edges: Vec<Vec<u32>>) -> Result<Self> {
        Ok(ParityEmbedding::new(Hypergraph::new(vertices, qubit_edges)?))
    }

    pub fn logical(&self) -> &Hypergraph {
        &self.logical
    }

    /// `N_p = |E|`.
    pub fn num_physical(&self) -> usize {
        self.logical.num_edges()
    }

    /// `N_l = |V|`.
    pub fn num_logical(&self) -> usize {
        self.logical.num_vertices()
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    /// `N_C = N_p - N_l + D`.
    pub fn num_constraints(&self) -> usize {
        (self.num_physical() + self.degeneracy).saturating_sub(self.num_logical())
    }

    /// Qubit-by-vertex incidence; row `m` is the vertex support of qubit `m+1`.
    pub fn supports(&self) -> &Gf2Matrix {
        &self.supports
    }

    /// Basis of supports `W` whose line-operator product is the identity.
    pub fn representation_kernel(&self) -> &[BitVector] {
        &self.kernel
    }

    /// Physical state of a logical weight `f` (coordinate `j` is vertex
    /// position `j`): `w(e) = 1 ⊕ ⨁_{v∈e} f(v)`.
    pub fn parity_state(&self, f: &BitVector) -> Result<BasisState> {
        if f.len() != self.num_logical() {
            return Err(Error::DimensionMismatch {
                expected: self.num_logical(),
                actual: f.len(),
                context: "logical weight length",
            });
        }
        Ok(BasisState(self.supports.mul_vec(f)?.not()))
    }

    /// Checks `⨁_{e∈C} w̄_e = 0` for every constraint in a basis of the
    /// constraint space, where `w̄ = 1 ⊕ w`.
    pub fn satisfies_constraints(&self, s: &BasisState) -> bool {
        s.n() == self.num_physical() && self.logical.constraint_space_basis().iter().all(|c| !c.bits().dot(&s.0.not()))
    }

    /// `Λ_v` for the vertex with id `v`.
    pub fn line_operator(&self, v: u32) -> Result<ProductOperator> {
        let p = self.logical.vertex_position(v)?;
        Ok(ProductOperator::single(self.num_logical(), p))
    }

    /// `𝕃`, in vertex order.
    pub fn line_operators(&self) -> Vec<ProductOperator> {
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
                context: "parity state length",
            });
        }
        Ok(BasisState(s.0.xor(&self.flip_mask(op))))
    }

    /// `Π`, in order of first appearance over logical weights `f = 0, 1, …`
    /// (bit `j` of the counter is vertex position `j`).
    pub fn enumerate_states(&self) -> Result<Subspace> {
        let nl = self.num_logical();
        if nl > MAX_LOGICAL_VERTICES {
            return Err(Error::Resource { what: "logical vertex count", value: nl, limit: MAX_LOGICAL_VERTICES });
        }
        let mut seen = std::collections::HashSet::new();
        let mut states = Vec::new();
        for f in 0u64..1 << nl {
            let s = self.parity_state(&BitVector::from_u64(nl, f))?;
            if seen.insert(s.clone()) {
                states.push(s);
            }
        }
        Subspace::new(self.num_physical(), states)
    }

    /// `O_A` assembled from the components of `H|_A`: per component a basis
    /// of the kernel of its incidence block, plus `δ_x` for each vertex not
    /// covered by `a`, plus the representation kernel.
    pub fn operator_set(&self, a: &EdgeSubset) -> OperatorSet {
        let nv = self.num_logical();
        let mut gens = Vec::new();
        let comps = self.logical.components_of(a);
        for comp in &comps {
            let comp_edges: Vec<usize> = a.iter().filter(|&e| comp.contains(&self.logical.edge(e)[0])).collect();
            if comp_edges.iter().all(|&e| self.logical.edge(e).len() == 2) {
                gens.push(BitVector::from_indices(nv, comp.iter().copied()));
            } else {
                let local: Vec<usize> = {
                    let mut m = vec![usize::MAX; nv];
                    for (k, &v) in comp.iter().enumerate() {
                        m[v] = k;
                    }
                    m
                };
                let rows = comp_edges
                    .iter()
                    .map(|&e| BitVector::from_indices(comp.len(), self.logical.edge(e).iter().map(|&v| local[v])))
                    .collect();
                let block = Gf2Matrix::from_rows(comp.len(), rows).expect("uniform rows");
                for x in block.nullspace_basis() {
                    gens.push(BitVector::from_indices(nv, x.iter_ones().map(|k| comp[k])));
                }
            }
        }
        let covered = self.logical.covered_vertices(a);
        gens.extend((0..nv).filter(|&v| !covered.get(v)).map(|v| BitVector::unit(nv, v)));
        OperatorSet::new(nv, gens, &self.kernel)
    }

    /// `O_A` computed directly as the supports `W` with `|W ∩ e|` even for
    /// every `e ∈ a`. Independent of the component decomposition.
    pub fn operator_set_direct(&self, a: &EdgeSubset) -> OperatorSet {
        let gens = self.logical.incidence_rows(a).nullspace_basis();
        OperatorSet::new(self.num_logical(), gens, &self.kernel)
    }

    /// Whether `a1 ~Π a2`, decided on operator sets in polynomial time.
    pub fn equivalent(&self, a1: &EdgeSubset, a2: &EdgeSubset) -> bool {
        bipartite_sets_equal(
            &self.operator_set(a1),
            &self.operator_set(&a1.complement()),
            &self.operator_set(a2),
            &self.operator_set(&a2.complement()),
        )
    }

    /// All bundles of `𝒫(E)`, keyed by canonical operator-set bases.
    pub fn classify(&self) -> Result<Classification> {
        let ne = self.num_physical();
        classify_by_key(ne, |mask| {
            self.operator_set(&EdgeSubset::from_bits(BitVector::from_u64(ne, mask))).canonical_basis()
        })
    }
}

/// Converts an edge subset to the physical subsystem it occupies.
pub fn edge_subsystem(a: &EdgeSubset) -> Subsystem {
    Subsystem::from_mask(a.bits().clone())
}

/// Converts a physical subsystem to the edge subset it occupies.
pub fn subsystem_edges(a: &Subsystem) -> EdgeSubset {
    EdgeSubset::from_bits(a.mask().clone())
}

pub fn enumerate_parity_states(pe: &ParityEmbedding) -> Result<Subspace> {
    pe.enumerate_states()
}

pub fn apply_product_operator(pe: &ParityEmbedding, op: &ProductOperator, s: &BasisState) -> Result<BasisState> {
    pe.apply(op, s)
}

pub fn parity_operator_set(pe: &ParityEmbedding, a: &EdgeSubset) -> OperatorSet {
    pe.operator_set(a)
}

pub fn parity_equivalent(pe: &ParityEmbedding, a1: &EdgeSubset, a2: &EdgeSubset) -> bool {
    pe.equivalent(a1, a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::subsystems_equivalent;

    fn k3() -> ParityEmbedding {
        ParityEmbedding::new(Hypergraph::new(vec![1, 2, 3], vec![vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap())
    }

    fn strings(r: &Subspace) -> Vec<String> {
        r.states().iter().map(|s| s.bits().to_string()).collect()
    }

    #[test]
    fn k3_parity_states() {
        assert_eq!(strings(&k3().enumerate_states().unwrap()), ["111", "010", "001", "100"]);
    }

    #[test]
    fn k3_line_operator_action() {
        let pe = k3();
        let s = BasisState::parse("111").unwrap();
        let l1 = pe.line_operator(1).unwrap();
        assert_eq!(pe.apply(&l1, &s).unwrap().bits().to_string(), "010");
        assert_eq!(pe.apply(&l1, &pe.apply(&l1, &s).unwrap()).unwrap(), s);
        let all = ProductOperator::new(BitVector::ones(3));
        assert_eq!(pe.apply(&all, &s).unwrap(), s);
    }

    #[test]
    fn empty_edge_set_has_one_empty_state() {
        let pe = ParityEmbedding::new(Hypergraph::new(vec![1, 2], vec![]).unwrap());
        let r = pe.enumerate_states().unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.n(), 0);
    }

    #[test]
    fn k5_counts() {
        let pe = ParityEmbedding::new(Hypergraph::complete(5));
        assert_eq!(pe.degeneracy(), 1);
        assert_eq!(pe.num_constraints(), 6);
        let r = pe.enumerate_states().unwrap();
        assert_eq!(r.len(), 16);
        assert!(r.states().iter().all(|s| pe.satisfies_constraints(s)));
        assert!(!pe.satisfies_constraints(&BasisState(BitVector::zeros(10).not().xor(&BitVector::unit(10, 0)))));
    }

    #[test]
    fn empty_subset_gives_everything() {
        let pe = ParityEmbedding::new(Hypergraph::complete(5));
        let o = pe.operator_set(&EdgeSubset::empty(10));
        assert_eq!(o.rank(), 5);
        assert_eq!(o.operator_count(), 16);
    }

    #[test]
    fn line_complement_gives_single_line_operator() {
        let h = Hypergraph::complete(5);
        let pe = ParityEmbedding::new(h.clone());
        let line = h.logical_line(3).unwrap();
        let o = pe.operator_set(&line.complement());
        assert_eq!(o.operator_count(), 2);
        assert!(o.contains(&pe.line_operator(3).unwrap()));
        assert!(pe.equivalent(&line, &line.complement()));
    }

    #[test]
    fn three_cycle_operator_set() {
        let h = Hypergraph::complete(5);
        let pe = ParityEmbedding::new(h.clone());
        let cycle = EdgeSubset::from_indices(
            10,
            [h.edge_position(&[0, 1]).unwrap(), h.edge_position(&[1, 2]).unwrap(), h.edge_position(&[0, 2]).unwrap()],
        );
        let o = pe.operator_set(&cycle);
        let expected = OperatorSet::new(
            5,
            vec![BitVector::parse_bits("11100").unwrap(), BitVector::unit(5, 3), BitVector::unit(5, 4)],
            pe.representation_kernel(),
        );
        assert!(o.same_as(&expected));
        assert_eq!(o.canonical_basis(), pe.operator_set_direct(&cycle).canonical_basis());
    }

    #[test]
    fn hyperedges_use_kernel_of_block() {
        // A single 3-body term {1,2,3}: W must meet it evenly.
        let h = Hypergraph::new(vec![1, 2, 3, 4], vec![vec![1, 2, 3], vec![3, 4]]).unwrap();
        let pe = ParityEmbedding::new(h);
        let a = EdgeSubset::from_indices(2, [0]);
        let o = pe.operator_set(&a);
        assert_eq!(o.canonical_basis(), pe.operator_set_direct(&a).canonical_basis());
        assert_eq!(o.rank(), 3);
    }

    #[test]
    fn polynomial_matches_quotients_on_k4() {
        let pe = ParityEmbedding::new(Hypergraph::complete(4));
        let r = pe.enumerate_states().unwrap();
        for m1 in 0u64..64 {
            for m2 in [0u64, 1, 7, 12, 33, 63] {
                let a1 = EdgeSubset::from_bits(BitVector::from_u64(6, m1));
                let a2 = EdgeSubset::from_bits(BitVector::from_u64(6, m2));
                assert_eq!(
                    pe.equivalent(&a1, &a2),
                    subsystems_equivalent(&r, &edge_subsystem(&a1), &edge_subsystem(&a2)),
                    "{m1} vs {m2}"
                );
            }
        }
    }

    #[test]
    fn json_with_qubit_map_reorders_edges() {
        let json = r#"{"logical":{"vertices":[1,2,3]},"qubit_map":{"1":[1,3],"2":[1,2],"3":[2,3]}}"#;
        let pe: ParityEmbedding = serde_json::from_str(json).unwrap();
        assert_eq!(pe.logical().edge_ids(0), vec![1, 3]);
        assert_eq!(pe.degeneracy(), 1);
        let back: ParityEmbedding = serde_json::from_str(&serde_json::to_string(&pe).unwrap()).unwrap();
        assert_eq!(back, pe);
        let bad = r#"{"logical":{"vertices":[1,2,3]},"qubit_map":{"1":[1,3],"3":[1,2]}}"#;
        assert!(serde_json::from_str::<ParityEmbedding>(bad).is_err());
    }
}
