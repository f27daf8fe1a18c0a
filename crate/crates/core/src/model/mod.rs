//! Dense simulation of the perturbed cluster chain: Hamiltonian, states, exact spectra,
//! thermal states and imaginary-time evolution.

mod density;
mod ensemble;
mod evolve;
mod hamiltonian;
mod spectrum;
mod state;

pub use density::DensityMatrix;
pub use ensemble::{Ensemble, GraphDiagonal, QuantumState};
pub use evolve::{energy, imaginary_time_evolve, Evolved, DEFAULT_TROTTER_STEP};
pub use hamiltonian::{hamiltonian, ModelParams, PauliSum};
pub use spectrum::{
    gibbs_density, ground_state, GibbsState, GroundState, Spectrum, DEGENERACY_TOL,
    MAX_DENSITY_QUBITS, QUASI_DEGENERACY_RATIO,
};
pub use state::{
    cluster_state, cz_ring_sign, hadamard_all, sample_pauli_outcomes, StateVector, C64,
    MAX_VECTOR_QUBITS,
};
