//! Pauli strings in symplectic form and the Z2 x Z2 cluster-chain operators built from them.

mod cluster;
mod group;
mod string;

pub use cluster::{
    block_site, boundary_left, boundary_right, kappa, kappa_decompose, local_symmetry,
    num_blocks, sop, sop_index, stabilizer, symmetry, symmetry_index, truncated_symmetry,
    twisted_sop, wrap_site, KappaForm, KappaIndex,
};
pub use group::{check_pair, GroupElement};
pub use string::{Pauli, PauliString};
