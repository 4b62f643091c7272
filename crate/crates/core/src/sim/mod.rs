//! Dense state-vector annealing and entanglement diagnostics.

pub mod entanglement;
pub mod evolve;
pub mod hamiltonian;
pub mod state;

pub use entanglement::{
    all_bipartition_spectra, entanglement_entropy, entanglement_spectrum, leakage, mixed_entanglement_spectrum,
    mixed_reduced_density_matrix, reduced_density_matrix, spectrum_via_quotient, subspace_leakage, Spectrum,
};
pub use evolve::{evolve, evolve_with, NORM_DRIFT_TOLERANCE};
pub use hamiltonian::{
    build_hamiltonian, AnnealSpec, Constraint, ConstraintSign, HamiltonianAt, Integrator, ProblemHamiltonian, Schedule,
};
pub use state::{random_coefficients, StateVector, MAX_STATE_QUBITS};
