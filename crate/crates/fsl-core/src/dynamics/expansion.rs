//! Biorthogonal expansion of initial states.

use num_complex::Complex64 as C64;

use crate::error::{FslError, Result};
use crate::fock::SpinBosonState;
use crate::nonhermitian::{BiorthoEigenSystem, Branch};

/// Reconstructing the initial state from its retained coefficients must
/// succeed to this L2 residual, otherwise the mode set is too small.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct ModeCoefficient {
    pub n: usize,
    pub branch: Branch,
    pub c: C64,
}

/// Coefficients on an exceptional-point block, in its orthonormal
/// `(phi_1, phi_2)` basis.
#[derive(Debug, Clone, Copy)]
pub struct EpCoefficients {
    pub n: usize,
    pub c1: C64,
    pub c2: C64,
}

/// Expansion of a state over the bound state, the generic biorthogonal
/// modes, and any exceptional-point blocks.
#[derive(Debug, Clone)]
pub struct ExpansionCoefficients {
    /// `<alpha,down | psi0>`.
    pub c0: C64,
    /// `<L_{n,g} | psi0>` for every retained generic mode.
    pub modes: Vec<ModeCoefficient>,
    pub ep: Vec<EpCoefficients>,
}

impl ExpansionCoefficients {
    /// Rebuild the state this expansion represents at `t = 0`.
    pub fn reconstruct(&self, sys: &BiorthoEigenSystem) -> SpinBosonState {
        let mut out = SpinBosonState::zero(sys.cutoff);
        out.axpy(self.c0, &sys.bound.right);
        for (mc, mode) in self.modes.iter().zip(sys.modes.iter()) {
            debug_assert!(mc.n == mode.n && mc.branch == mode.branch);
            out.axpy(mc.c, &mode.right);
        }
        for (ec, block) in self.ep.iter().zip(sys.ep_blocks.iter()) {
            debug_assert_eq!(ec.n, block.n);
            out.axpy(ec.c1, &block.phi1);
            out.axpy(ec.c2, &block.phi2);
        }
        out
    }
}

/// Project a normalized state onto the biorthogonal basis: `c0` against the
/// bound state, `c_{n,g}` against the left eigenstates, and `(c1, c2)`
/// against the orthonormal pair of any exceptional-point block.
///
/// The retained modes must reconstruct the input within
/// [`RECONSTRUCTION_TOL`]; a larger residual signals that `n_levels` or the
/// cutoff is too small for this initial state.
pub fn expand_initial_state(
    psi0: &SpinBosonState,
    sys: &BiorthoEigenSystem,
) -> Result<ExpansionCoefficients> {
    if psi0.dim() != sys.cutoff.dim() {
        return Err(FslError::InvalidConfig(
            "initial state and eigensystem use different cutoffs".into(),
        ));
    }
    if !psi0.is_normalized() {
        return Err(FslError::InvalidConfig(format!(
            "initial state is not normalized: |psi| = {}",
            psi0.norm()
        )));
    }

    let c0 = sys.bound.left.inner(psi0);
    let modes = sys
        .modes
        .iter()
        .map(|m| ModeCoefficient {
            n: m.n,
            branch: m.branch,
            c: m.left.inner(psi0),
        })
        .collect();
    let ep = sys
        .ep_blocks
        .iter()
        .map(|b| EpCoefficients {
            n: b.n,
            c1: b.phi1.inner(psi0),
            c2: b.phi2.inner(psi0),
        })
        .collect();

    let coeffs = ExpansionCoefficients { c0, modes, ep };
    let residual = coeffs.reconstruct(sys).distance(psi0);
    if residual > RECONSTRUCTION_TOL {
        return Err(FslError::ReconstructionFailure {
            residual,
            tol: RECONSTRUCTION_TOL,
        });
    }
    Ok(coeffs)
}
