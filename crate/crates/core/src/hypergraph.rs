//! Logical problem hypergraphs.
//!
//! Vertices and edges are addressed by their position in the declared
//! enumeration; every bit-vector over vertices or edges uses that order.
//! The edge order of a hypergraph used in a parity embedding is also the
//! physical-qubit order.

use std::collections::HashSet;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix};

/// A set of edges, stored as an indicator vector over the edge enumeration.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct EdgeSubset(BitVector);

impl EdgeSubset {
    pub fn empty(num_edges: usize) -> Self {
        EdgeSubset(BitVector::zeros(num_edges))
    }

    pub fn all(num_edges: usize) -> Self {
        EdgeSubset(BitVector::ones(num_edges))
    }

    pub fn from_indices(num_edges: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        EdgeSubset(BitVector::from_indices(num_edges, indices))
    }

    pub fn from_bits(bits: BitVector) -> Self {
        EdgeSubset(bits)
    }

    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    pub fn into_bits(self) -> BitVector {
        self.0
    }

    /// Number of edges in the enumeration (not the subset size).
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.0.get(edge)
    }

    pub fn complement(&self) -> Self {
        EdgeSubset(self.0.not())
    }

    pub fn symmetric_difference(&self, other: &EdgeSubset) -> Self {
        EdgeSubset(self.0.xor(&other.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter_ones()
    }
}

#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    vertices: Vec<u32>,
    #[serde(default)]
    edges: Vec<Vec<u32>>,
}

/// A hypergraph `(V, E)` with edges of size at least two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphRepr", into = "HypergraphRepr")]
pub struct Hypergraph {
    vertices: Vec<u32>,
    /// Each edge as sorted vertex positions.
    edges: Vec<Vec<usize>>,
}

impl TryFrom<HypergraphRepr> for Hypergraph {
    type Error = Error;

    fn try_from(r: HypergraphRepr) -> Result<Self> {
        Hypergraph::new(r.vertices, r.edges)
    }
}

impl From<Hypergraph> for HypergraphRepr {
    fn from(h: Hypergraph) -> Self {
        let edges = (0..h.edges.len()).map(|e| h.edge_ids(e)).collect();
        HypergraphRepr { vertices: h.vertices, edges }
    }
}

impl Hypergraph {
    pub fn new(vertices: Vec<u32>, edges: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::input(format!("vertex {v} listed twice")));
            }
        }
        let position = |id: u32| vertices.iter().position(|&v| v == id).ok_or(Error::UnknownVertex(id));
        let mut out_edges: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        let mut seen_edges = HashSet::new();
        for e in &edges {
            let mut pos = e.iter().map(|&id| position(id)).collect::<Result<Vec<_>>>()?;
            pos.sort_unstable();
            pos.dedup();
            if pos.len() != e.len() {
                return Err(Error::input(format!("edge {e:?} repeats a vertex")));
            }
            if pos.len() < 2 {
                return Err(Error::input(format!("edge {e:?} has fewer than two vertices")));
            }
            if !seen_edges.insert(pos.clone()) {
                return Err(Error::input(format!("edge {e:?} listed twice")));
            }
            out_edges.push(pos);
        }
        Ok(Hypergraph { vertices, edges: out_edges })
    }

    /// The complete graph on vertices `0..n`, edges in lexicographic order.
    pub fn complete(n: u32) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])).collect();
        Hypergraph::new((0..n).collect(), edges).expect("complete graph is well formed")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Vertex positions of edge `e`, ascending.
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Vertex ids of edge `e`.
    pub fn edge_ids(&self, e: usize) -> Vec<u32> {
        self.edges[e].iter().map(|&p| self.vertices[p]).collect()
    }

    pub fn vertex_position(&self, id: u32) -> Result<usize> {
        self.vertices.iter().position(|&v| v == id).ok_or(Error::UnknownVertex(id))
    }

    /// Position of the edge with exactly these vertex ids, if present.
    pub fn edge_position(&self, ids: &[u32]) -> Result<usize> {
        let mut pos = ids.iter().map(|&id| self.vertex_position(id)).collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        self.edges.iter().position(|e| *e == pos).ok_or_else(|| Error::input(format!("no edge {ids:?}")))
    }

    pub fn is_graph(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }

    pub fn is_complete_graph(&self) -> bool {
        let n = self.num_vertices();
        self.is_graph() && self.num_edges() == n * n.saturating_sub(1) / 2
    }

    /// Edge-by-vertex incidence matrix: entry `(e, v)` is one iff `v ∈ e`.
    pub fn incidence_matrix(&self) -> Gf2Matrix {
        let rows = self.edges.iter().map(|e| BitVector::from_indices(self.num_vertices(), e.iter().copied())).collect();
        Gf2Matrix::from_rows(self.num_vertices(), rows).expect("uniform row length")
    }

    /// Incidence rows restricted to the edges of `a`.
    pub fn incidence_rows(&self, a: &EdgeSubset) -> Gf2Matrix {
        let rows =
            a.iter().map(|e| BitVector::from_indices(self.num_vertices(), self.edges[e].iter().copied())).collect();
        Gf2Matrix::from_rows(self.num_vertices(), rows).expect("uniform row length")
    }

    /// Vertex positions covered by `a`, i.e. `V_A`.
    pub fn covered_vertices(&self, a: &EdgeSubset) -> BitVector {
        let mut cover = BitVector::zeros(self.num_vertices());
        for e in a.iter() {
            for &v in &self.edges[e] {
                cover.set(v, true);
            }
        }
        cover
    }

    /// `H|_A`: edge set `a` and vertex set `V_A`.
    pub fn restriction(&self, a: &EdgeSubset) -> Hypergraph {
        assert_eq!(a.universe(), self.num_edges());
        let cover = self.covered_vertices(a);
        let vertices: Vec<u32> = cover.iter_ones().map(|p| self.vertices[p]).collect();
        let remap: Vec<Option<usize>> = {
            let mut m = vec![None; self.num_vertices()];
            for (k, p) in cover.iter_ones().enumerate() {
                m[p] = Some(k);
            }
            m
        };
        let edges = a.iter().map(|e| self.edges[e].iter().map(|&v| remap[v].expect("covered")).collect()).collect();
        Hypergraph { vertices, edges }
    }

    /// Connected components of `H|_A`, as sorted vertex positions. Only
    /// vertices covered by `a` appear; components are ordered by their
    /// smallest vertex.
    pub fn components_of(&self, a: &EdgeSubset) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut uf = UnionFind::<usize>::new(n);
        let cover = self.covered_vertices(a);
        for e in a.iter() {
            let edge = &self.edges[e];
            for w in &edge[1..] {
                uf.union(edge[0], *w);
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for v in cover.iter_ones() {
            let root = uf.find(v);
            if slot[root] == usize::MAX {
                slot[root] = comps.len();
                comps.push(Vec::new());
            }
            comps[slot[root]].push(v);
        }
        comps
    }

    /// Connected components of this hypergraph's covered vertices, as vertex ids.
    pub fn connected_components(&self) -> Vec<Vec<u32>> {
        self.components_of(&EdgeSubset::all(self.num_edges()))
            .into_iter()
            .map(|c| c.into_iter().map(|p| self.vertices[p]).collect())
            .collect()
    }

    /// True iff `H|_A` is connected and covers every vertex.
    pub fn spans_connected(&self, a: &EdgeSubset) -> bool {
        let comps = self.components_of(a);
        comps.len() == 1 && comps[0].len() == self.num_vertices()
    }

    /// `L_v(H)`: the edges containing vertex `v`.
    pub fn logical_line(&self, v: u32) -> Result<EdgeSubset> {
        let p = self.vertex_position(v)?;
        Ok(self.logical_line_at(p))
    }

    pub(crate) fn logical_line_at(&self, p: usize) -> EdgeSubset {
        EdgeSubset::from_indices(self.num_edges(), (0..self.num_edges()).filter(|&e| self.edges[e].contains(&p)))
    }

    /// Every vertex touched by `c` touches an even number of its edges.
    pub fn is_constraint(&self, c: &EdgeSubset) -> bool {
        let mut parity = BitVector::zeros(self.num_vertices());
        for e in c.iter() {
            for &v in &self.edges[e] {
                parity.flip(v);
            }
        }
        parity.is_zero()
    }

    /// A basis of the constraint space, i.e. the kernel of the
    /// vertex-by-edge incidence matrix.
    pub fn constraint_space_basis(&self) -> Vec<EdgeSubset> {
        self.incidence_matrix().transpose().nullspace_basis().into_iter().map(EdgeSubset).collect()
    }

    pub fn constraint_space_dim(&self) -> usize {
        self.num_edges() - self.incidence_matrix().rank()
    }

    /// Checks that every listed set is a constraint and that together they
    /// span the full constraint space.
    pub fn spans_constraint_space(&self, constraints: &[EdgeSubset]) -> bool {
        if constraints.iter().any(|c| c.universe() != self.num_edges() || !self.is_constraint(c)) {
            return false;
        }
        let rows = constraints.iter().map(|c| c.bits().clone()).collect();
        let m = Gf2Matrix::from_rows(self.num_edges(), rows).expect("uniform length");
        m.rank() == self.constraint_space_dim()
    }

    /// Vertex sets `W` with `|W ∩ e|` even for every edge; these are the
    /// supports whose line-operator product acts as the identity.
    pub fn representation_kernel(&self) -> Vec<BitVector> {
        self.incidence_matrix().nullspace_basis()
    }
}

/// Free-function form of [`Hypergraph::restriction`].
pub fn restriction(h: &Hypergraph, a: &EdgeSubset) -> Hypergraph {
    h.restriction(a)
}

/// Free-function form of [`Hypergraph::connected_components`].
pub fn connected_components(h: &Hypergraph) -> Vec<Vec<u32>> {
    h.connected_components()
}

/// Free-function form of [`Hypergraph::logical_line`].
pub fn logical_line(h: &Hypergraph, v: u32) -> Result<EdgeSubset> {
    h.logical_line(v)
}

/// Free-function form of [`Hypergraph::is_constraint`].
pub fn is_constraint(h: &Hypergraph, c: &EdgeSubset) -> bool {
    h.is_constraint(c)
}

/// Free-function form of [`Hypergraph::constraint_space_basis`].
pub fn constraint_space_basis(h: &Hypergraph) -> Vec<EdgeSubset> {
    h.constraint_space_basis()
}
