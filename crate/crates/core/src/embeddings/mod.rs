//! Parity and minor embeddings and the operator-set view of subsystem
//! equivalence.
//!
//! Both embeddings act on physical qubits through flips: parity qubit `m`
//! is flipped by the line operator of every vertex of its edge, minor qubit
//! `m` by the chain operator of its own vertex. An operator set `O_A` is the
//! set of products that leave `A` untouched, stored as a GF(2) span of vertex
//! supports, and equality of bundles reduces to rank computations.

pub mod minor;
pub mod operators;
pub mod parity;

pub use minor::{enumerate_minor_states, minor_equivalent, minor_operator_set, MinorEmbedding};
pub use operators::{
    bipartite_sets_equal, verify_generator_set, GeneratorReport, GeneratorViolation, OperatorSet, ProductOperator,
    StateMap,
};
pub use parity::{
    apply_product_operator, edge_subsystem, enumerate_parity_states, parity_equivalent, parity_operator_set,
    subsystem_edges, ParityEmbedding,
};
