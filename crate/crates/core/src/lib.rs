//! Classification of entanglement bundles for subspaces spanned by
//! computational basis states, with tooling for parity and minor embeddings
//! and a small state-vector simulator to observe them.

pub mod analysis;
pub mod embeddings;
pub mod error;
pub mod gf2;
pub mod hypergraph;
pub mod instances;
pub mod sim;
pub mod subspace;

pub use embeddings::{MinorEmbedding, OperatorSet, ParityEmbedding, ProductOperator};
pub use error::{Error, Result};
pub use gf2::{BitVector, Gf2Matrix};
pub use hypergraph::{EdgeSubset, Hypergraph};
pub use instances::{AnnealInstance, Instance};
pub use sim::{AnnealSpec, ProblemHamiltonian, Schedule, Spectrum, StateVector};
pub use subspace::{
    counterexample_family, enumerate_bundles, quotient_set, subsystems_equivalent, BasisState, Bundle, Classification,
    QuotientSet, Subspace, Subsystem,
};
