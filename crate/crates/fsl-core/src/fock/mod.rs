//! Truncated-Fock-space representations: ladder and spin operators,
//! displacement operators, displaced Fock states, and Hamiltonian assembly.

pub mod displacement;
pub mod hamiltonian;
pub mod operators;
pub mod params;
pub mod state;

pub use displacement::{
    build_displacement, build_displacement_expm, certified_band, displaced_fock_state,
    displacement_boson_matrix,
};
pub use hamiltonian::{build_hamiltonian, HamiltonianKind};
pub use operators::{
    build_ladder_ops, spin_minus, spin_plus, spin_x, spin_y, spin_z, OperatorMatrix, OperatorTag,
};
pub use params::{FockCutoff, ModelParams, DEFAULT_TAIL_TOL};
pub use state::{basis_index, Spin, SpinBosonState, NORM_TOL};
