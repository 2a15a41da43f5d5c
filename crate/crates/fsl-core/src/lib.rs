//! Analytically solvable semi-infinite spin-boson SSH chain.
//!
//! The boson Fock ladder doubles as a synthetic lattice dimension with
//! `sqrt(n+1)`-graded intercell hopping. A displacement transformation maps
//! the driven chain onto the bare Jaynes-Cummings ladder, which makes the
//! full eigensystem exact in both the Hermitian and the balanced gain/loss
//! regime. This crate provides:
//!
//! - [`fock`]: truncated basis, ladder/spin/displacement operators and
//!   Hamiltonian assembly;
//! - [`spectra`]: the analytic Hermitian eigensystem, zero-mode profiles,
//!   chiral-symmetry checks, and a finite isotropic-chain reference solver;
//! - [`nonhermitian`]: the biorthogonal eigensystem, PT-phase
//!   classification, exceptional points and Jordan blocks;
//! - [`dynamics`]: analytic time evolution with both renormalization
//!   schemes, an independent dense propagator oracle, observables, and the
//!   bound-state stabilization time.
//!
//! Every analytic construction is validated against an independent dense
//! truncated-matrix computation in the test suite.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod nonhermitian;
pub mod spectra;

pub use error::{FslError, Result};
pub use fock::{FockCutoff, ModelParams, Spin, SpinBosonState};
