//! Biorthogonal eigensystem of the balanced gain/loss chain.
//!
//! On the displaced basis the Hamiltonian splits into the bound state (gain
//! `i gamma`) plus independent 2x2 blocks
//!
//! ```text
//! h_n = [ -i gamma      j2 sqrt(n+1) ]
//!       [ j2 sqrt(n+1)  i gamma      ]
//! ```
//!
//! over `{ phi_1(n) = D|n,up>, phi_2(n) = D|n+1,down> }`, with eigenvalues
//! `E_{n,+-} = +- sqrt(j2^2 (n+1) - gamma^2)`. Blocks where
//! `j2 sqrt(n+1) = gamma` sit at a second-order exceptional point and are
//! handled through their Jordan form instead of the generic branch.

use num_complex::Complex64 as C64;

use crate::dynamics::observables::reduced_spin_entropy;
use crate::error::{FslError, Result};
use crate::fock::displacement::{column_with_spin, displaced_columns};
use crate::fock::{FockCutoff, ModelParams, Spin, SpinBosonState};

/// Relative (to `j2`) tolerance used to recognize exceptional points.
pub const DEFAULT_EP_TOL: f64 = 1e-9;

/// Below this relative size of `<L|R>` an unflagged block is treated as an
/// unresolvable near-EP; reachable only when `ep_tol` is set far below the
/// default.
const EP_GUARD_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Plus => write!(f, "+"),
            Branch::Minus => write!(f, "-"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtPhase {
    /// All block eigenvalues real (`gamma < j2`).
    Symmetric,
    /// Some block eigenvalues form imaginary conjugate pairs (`gamma > j2`).
    Broken,
    /// `gamma = j2` within tolerance: the transition point.
    Critical,
}

impl std::fmt::Display for PtPhase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PtPhase::Symmetric => write!(f, "PTS"),
            PtPhase::Broken => write!(f, "PTB"),
            PtPhase::Critical => write!(f, "critical"),
        }
    }
}

/// The bound state `|alpha, down>` with eigenvalue `i gamma`. It is its own
/// left eigenstate.
#[derive(Debug, Clone)]
pub struct BoundMode {
    pub eigenvalue: C64,
    pub right: SpinBosonState,
    pub left: SpinBosonState,
}

/// One biorthogonally normalized eigenmode of a 2x2 block.
#[derive(Debug, Clone)]
pub struct Mode {
    pub n: usize,
    pub branch: Branch,
    pub eigenvalue: C64,
    pub right: SpinBosonState,
    pub left: SpinBosonState,
}

/// A block at its exceptional point: kept as the orthonormal pair
/// `(phi_1, phi_2)` instead of coalesced eigenvectors.
#[derive(Debug, Clone)]
pub struct EpBlock {
    pub n: usize,
    pub phi1: SpinBosonState,
    pub phi2: SpinBosonState,
}

#[derive(Debug, Clone)]
pub struct BiorthoEigenSystem {
    pub params: ModelParams,
    pub cutoff: FockCutoff,
    pub n_levels: usize,
    pub ep_tol: f64,
    pub bound: BoundMode,
    /// Generic blocks, both branches, `n = 0 .. n_levels - 1` minus EPs.
    pub modes: Vec<Mode>,
    pub ep_blocks: Vec<EpBlock>,
    pub pt_phase: PtPhase,
}

impl BiorthoEigenSystem {
    pub fn ep_indices(&self) -> Vec<usize> {
        self.ep_blocks.iter().map(|b| b.n).collect()
    }
}

fn is_at_ep(params: &ModelParams, n: usize, ep_tol: f64) -> bool {
    (params.intercell(n) - params.gamma()).abs() <= ep_tol * params.j2().abs()
}

/// Block eigenvalue `E_{n,+}` on the principal branch: real for
/// `gamma <= j2 sqrt(n+1)`, otherwise `+i sqrt(gamma^2 - j2^2 (n+1))`.
pub fn block_eigenvalue(params: &ModelParams, n: usize, branch: Branch) -> C64 {
    let det = params.intercell(n).powi(2) - params.gamma().powi(2);
    let plus = if det >= 0.0 {
        C64::new(det.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-det).sqrt())
    };
    match branch {
        Branch::Plus => plus,
        Branch::Minus => -plus,
    }
}

/// PT phase of the block family plus the indices of exact exceptional points.
pub fn classify_pt_phase(params: &ModelParams, ep_tol: f64) -> (PtPhase, Vec<usize>) {
    let (g, j2) = (params.gamma(), params.j2().abs());
    let phase = if (g - j2).abs() <= ep_tol * j2 {
        PtPhase::Critical
    } else if g < j2 {
        PtPhase::Symmetric
    } else {
        PtPhase::Broken
    };
    // j2 sqrt(n+1) is strictly increasing, so only the integers adjacent to
    // (gamma/j2)^2 - 1 can match.
    let mut eps = Vec::new();
    if g > 0.0 {
        let guess = (g / j2).powi(2) - 1.0;
        let lo = (guess - 2.0).max(0.0) as usize;
        for n in lo..=(guess + 2.0).max(0.0) as usize {
            if is_at_ep(params, n, ep_tol) {
                eps.push(n);
            }
        }
    }
    (phase, eps)
}

/// 2x2 complex matrices for the block algebra.
pub type Mat2 = [[C64; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut max = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            max = max.max((a[i][j] - b[i][j]).norm());
        }
    }
    max
}

/// Jordan decomposition `h = P J P^(-1)` of an EP block.
#[derive(Debug, Clone)]
pub struct JordanTriple {
    pub p: Mat2,
    pub j: Mat2,
    pub p_inv: Mat2,
}

#[derive(Debug, Clone)]
pub struct SubspaceBlock {
    pub n: usize,
    pub h: Mat2,
    pub at_ep: bool,
    pub jordan: Option<JordanTriple>,
}

/// The 2x2 block Hamiltonian over `(phi_1(n), phi_2(n))`, with its Jordan
/// triple attached when the block sits at an exceptional point.
pub fn subspace_block(params: &ModelParams, n: usize, ep_tol: f64) -> SubspaceBlock {
    let a = C64::new(params.intercell(n), 0.0);
    let ig = C64::new(0.0, params.gamma());
    let h = [[-ig, a], [a, ig]];
    let at_ep = is_at_ep(params, n, ep_tol);
    let jordan = at_ep.then(|| {
        let g = C64::new(params.gamma(), 0.0);
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        JordanTriple {
            p: [[one, zero], [i, one]],
            j: [[zero, g], [zero, zero]],
            p_inv: [[one, zero], [-i, one]],
        }
    });
    SubspaceBlock { n, h, at_ep, jordan }
}

fn block_matrix(params: &ModelParams, n: usize, dissipative: bool) -> Mat2 {
    let b = subspace_block(params, n, 0.0);
    if !dissipative {
        return b.h;
    }
    let shift = C64::new(0.0, -params.gamma());
    let mut h = b.h;
    h[0][0] += shift;
    h[1][1] += shift;
    h
}

/// Max elementwise `| X conj(h_n) X - h_n |` over blocks `n < n_levels`,
/// where `X` is the block parity (swap) operator.
///
/// Zero to machine precision for the balanced chain; `2 gamma` for the
/// dissipative variant, whose constant `-i gamma` offset breaks the symmetry.
pub fn pt_symmetry_residual(params: &ModelParams, n_levels: usize, dissipative: bool) -> f64 {
    let mut max = 0.0f64;
    for n in 0..n_levels {
        let h = block_matrix(params, n, dissipative);
        let hc = [[h[0][0].conj(), h[0][1].conj()], [h[1][0].conj(), h[1][1].conj()]];
        // X m X swaps both indices
        let swapped = [[hc[1][1], hc[1][0]], [hc[0][1], hc[0][0]]];
        max = max.max(mat2_max_abs_diff(&swapped, &h));
    }
    max
}

/// Build the biorthogonal eigensystem with blocks `n = 0 .. n_levels - 1`.
///
/// Right states follow the analytic form `a phi_1 + (i gamma + E) phi_2`,
/// left states carry the conjugated second coefficient; both are scaled by
/// the principal square root of `<L|R> = a^2 + (i gamma + E)^2` (the left
/// state by its conjugate) so that the Gram matrix is exactly the identity.
/// Blocks at an exceptional point are reported in `ep_blocks` instead.
pub fn analytic_nh_spectrum(
    params: &ModelParams,
    n_levels: usize,
    cutoff: &FockCutoff,
    ep_tol: f64,
) -> Result<BiorthoEigenSystem> {
    if n_levels > cutoff.n_active() {
        return Err(FslError::InvalidConfig(format!(
            "n_levels = {n_levels} exceeds the active band {}",
            cutoff.n_active()
        )));
    }
    let cols = displaced_columns(params.alpha(), cutoff, n_levels)?;
    let bound_state = column_with_spin(&cols[0], Spin::Down, cutoff);
    let bound = BoundMode {
        eigenvalue: C64::new(0.0, params.gamma()),
        right: bound_state.clone(),
        left: bound_state,
    };

    let mut modes = Vec::with_capacity(2 * n_levels);
    let mut ep_blocks = Vec::new();
    for n in 0..n_levels {
        let phi1 = column_with_spin(&cols[n], Spin::Up, cutoff);
        let phi2 = column_with_spin(&cols[n + 1], Spin::Down, cutoff);
        if is_at_ep(params, n, ep_tol) {
            ep_blocks.push(EpBlock { n, phi1, phi2 });
            continue;
        }
        let a = C64::new(params.intercell(n), 0.0);
        let ig = C64::new(0.0, params.gamma());
        for branch in [Branch::Plus, Branch::Minus] {
            let e = block_eigenvalue(params, n, branch);
            let coeff = ig + e;
            let overlap = a * a + coeff * coeff; // <L|R> of the raw pair
            let scale = 2.0 * params.intercell(n).powi(2).max(params.gamma().powi(2));
            if overlap.norm() < EP_GUARD_REL * scale {
                return Err(FslError::EpUnresolvable {
                    n,
                    overlap: overlap.norm(),
                });
            }
            let nu = overlap.sqrt();
            let one = C64::new(1.0, 0.0);
            let mut right = phi1.clone();
            right.scale(a);
            right.axpy(coeff, &phi2);
            right.scale(one / nu);
            let mut left = phi1.clone();
            left.scale(a);
            left.axpy(coeff.conj(), &phi2);
            left.scale(one / nu.conj());
            modes.push(Mode {
                n,
                branch,
                eigenvalue: e,
                right,
                left,
            });
        }
    }

    let (pt_phase, _) = classify_pt_phase(params, ep_tol);
    Ok(BiorthoEigenSystem {
        params: *params,
        cutoff: *cutoff,
        n_levels,
        ep_tol,
        bound,
        modes,
        ep_blocks,
        pt_phase,
    })
}

/// Entanglement entropy (natural log) of one block eigenstate after
/// conventional normalization, from the reduced spin state of the truncated
/// vector. Errors at an exceptional point, where the generic eigenstate
/// normalization is singular.
pub fn eigenstate_entropy(
    params: &ModelParams,
    n: usize,
    branch: Branch,
    cutoff: &FockCutoff,
) -> Result<f64> {
    if is_at_ep(params, n, DEFAULT_EP_TOL) {
        return Err(FslError::EpUnresolvable { n, overlap: 0.0 });
    }
    let cols = displaced_columns(params.alpha(), cutoff, n + 1)?;
    let phi1 = column_with_spin(&cols[n], Spin::Up, cutoff);
    let phi2 = column_with_spin(&cols[n + 1], Spin::Down, cutoff);
    let a = C64::new(params.intercell(n), 0.0);
    let coeff = C64::new(0.0, params.gamma()) + block_eigenvalue(params, n, branch);
    let mut state = phi1;
    state.scale(a);
    state.axpy(coeff, &phi2);
    Ok(reduced_spin_entropy(&state.normalized()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_hamiltonian, HamiltonianKind};

    fn params(gamma: f64) -> ModelParams {
        ModelParams::new(1.0, 0.2, gamma).unwrap()
    }

    fn cutoff() -> FockCutoff {
        FockCutoff::new(256, 1e-10).unwrap()
    }

    #[test]
    fn pts_block_eigenvalues_are_real() {
        // E_{0,+-} = +- sqrt(0.2^2 - 0.15^2) = +- sqrt(0.0175)
        let e = block_eigenvalue(&params(0.15), 0, Branch::Plus);
        assert!((e.re - 0.13228756555322954).abs() < 1e-16);
        assert_eq!(e.im, 0.0);
    }

    #[test]
    fn gamma_zero_reduces_to_hermitian() {
        let p = params(0.0);
        let sys = analytic_nh_spectrum(&p, 8, &cutoff(), DEFAULT_EP_TOL).unwrap();
        assert_eq!(sys.pt_phase, PtPhase::Symmetric);
        assert!(sys.ep_blocks.is_empty());
        for m in &sys.modes {
            assert_eq!(m.eigenvalue.im, 0.0);
            assert!(m.left.distance(&m.right) < 1e-12, "left = right at gamma = 0");
        }
    }

    #[test]
    fn ptb_gain_modes() {
        // gamma = 0.5, j2 = 0.2: blocks n <= 5 have purely imaginary
        // eigenvalues with |Im E| < gamma.
        let p = params(0.5);
        let sys = analytic_nh_spectrum(&p, 40, &cutoff(), DEFAULT_EP_TOL).unwrap();
        assert_eq!(sys.pt_phase, PtPhase::Broken);
        let imaginary: Vec<_> = sys.modes.iter().filter(|m| m.eigenvalue.im != 0.0).collect();
        assert_eq!(imaginary.len(), 12); // n = 0..5, both branches
        for m in &imaginary {
            assert!(m.n <= 5);
            assert_eq!(m.eigenvalue.re, 0.0);
            assert!(m.eigenvalue.im.abs() < p.gamma());
            // principal-branch convention: the plus branch carries the gain
            if m.branch == Branch::Plus {
                assert!(m.eigenvalue.im > 0.0);
            }
        }
        // spectrum symmetric about both axes of the complex plane
        for m in &sys.modes {
            let e = m.eigenvalue;
            let negated = sys
                .modes
                .iter()
                .any(|o| o.n == m.n && (o.eigenvalue + e).norm() < 1e-15);
            let conjugated = sys
                .modes
                .iter()
                .any(|o| o.n == m.n && (o.eigenvalue - e.conj()).norm() < 1e-15);
            assert!(negated && conjugated);
        }
    }

    #[test]
    fn pt_phase_classification() {
        assert_eq!(
            classify_pt_phase(&params(0.15), DEFAULT_EP_TOL),
            (PtPhase::Symmetric, vec![])
        );
        let (phase, eps) = classify_pt_phase(&params(0.5), DEFAULT_EP_TOL);
        assert_eq!(phase, PtPhase::Broken);
        assert!(eps.is_empty(), "(gamma/j2)^2 = 6.25 is not an integer");
        // j2 sqrt(4) = 0.4 exactly
        let (phase, eps) = classify_pt_phase(&params(0.4), DEFAULT_EP_TOL);
        assert_eq!(phase, PtPhase::Broken);
        assert_eq!(eps, vec![3]);
        assert_eq!(
            classify_pt_phase(&params(0.2), DEFAULT_EP_TOL).0,
            PtPhase::Critical
        );
    }

    #[test]
    fn biorthonormality_gram_matrix() {
        for gamma in [0.15, 0.25, 0.5] {
            let sys = analytic_nh_spectrum(&params(gamma), 20, &cutoff(), DEFAULT_EP_TOL).unwrap();
            let all: Vec<(&SpinBosonState, &SpinBosonState)> = std::iter::once((&sys.bound.left, &sys.bound.right))
                .chain(sys.modes.iter().map(|m| (&m.left, &m.right)))
                .collect();
            for (i, (li, _)) in all.iter().enumerate() {
                for (j, (_, rj)) in all.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    let got = li.inner(rj);
                    assert!(
                        (got - C64::new(want, 0.0)).norm() < 1e-9,
                        "gamma={gamma} Gram({i},{j}) = {got}"
                    );
                }
            }
        }
    }

    #[test]
    fn eigen_residuals_against_dense_matrices() {
        for gamma in [0.15, 0.5] {
            let p = params(gamma);
            let c = cutoff();
            let h = build_hamiltonian(&p, &c, HamiltonianKind::BalancedGainLoss);
            let hdag = h.dagger();
            let sys = analytic_nh_spectrum(&p, 20, &c, DEFAULT_EP_TOL).unwrap();

            let check = |state: &SpinBosonState, e: C64, op: &crate::fock::OperatorMatrix| {
                let mut r = op.apply(state);
                r.axpy(-e, state);
                r.norm() / state.norm()
            };
            assert!(check(&sys.bound.right, sys.bound.eigenvalue, &h) < 1e-8);
            assert!(check(&sys.bound.left, sys.bound.eigenvalue.conj(), &hdag) < 1e-8);
            for m in &sys.modes {
                assert!(
                    check(&m.right, m.eigenvalue, &h) < 1e-8,
                    "right residual gamma={gamma} n={} {}",
                    m.n,
                    m.branch
                );
                assert!(
                    check(&m.left, m.eigenvalue.conj(), &hdag) < 1e-8,
                    "left residual gamma={gamma} n={} {}",
                    m.n,
                    m.branch
                );
            }
        }
    }

    #[test]
    fn ep_block_is_jordan_not_diagonalizable() {
        let p = params(0.4);
        let b = subspace_block(&p, 3, DEFAULT_EP_TOL);
        assert!(b.at_ep);
        let j = b.jordan.as_ref().unwrap();
        // P J P^(-1) reproduces the block entrywise
        let rebuilt = mat2_mul(&j.p, &mat2_mul(&j.j, &j.p_inv));
        assert!(mat2_max_abs_diff(&rebuilt, &b.h) < 1e-15);
        // coalesced eigenvector [1, i]: h [1, i]^T = 0
        let v = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
        for i in 0..2 {
            let out = b.h[i][0] * v[0] + b.h[i][1] * v[1];
            assert!(out.norm() < 1e-16);
        }
        // neighbours are generic
        assert!(!subspace_block(&p, 2, DEFAULT_EP_TOL).at_ep);
        assert!(subspace_block(&p, 2, DEFAULT_EP_TOL).jordan.is_none());

        // gamma = 0: h_n = a X with eigenvalues +- a
        let b0 = subspace_block(&params(0.0), 4, DEFAULT_EP_TOL);
        assert_eq!(b0.h[0][0], C64::new(0.0, 0.0));
        assert_eq!(b0.h[0][1], C64::new(0.2 * 5f64.sqrt(), 0.0));
    }

    #[test]
    fn ep_blocks_are_excluded_from_modes() {
        let p = params(0.4);
        let sys = analytic_nh_spectrum(&p, 10, &cutoff(), DEFAULT_EP_TOL).unwrap();
        assert_eq!(sys.ep_indices(), vec![3]);
        assert!(sys.modes.iter().all(|m| m.n != 3));
        assert_eq!(sys.modes.len(), 18);
    }

    #[test]
    fn near_ep_guard_fires_with_tiny_ep_tol() {
        // one ulp away from the n = 3 exceptional point, with ep_tol far below
        // anything f64 can resolve
        let p = ModelParams::new(1.0, 0.2, 0.4 + 1e-16).unwrap();
        let err = analytic_nh_spectrum(&p, 10, &cutoff(), 1e-30).unwrap_err();
        match err {
            FslError::EpUnresolvable { n, .. } => assert_eq!(n, 3),
            other => panic!("expected EpUnresolvable, got {other}"),
        }
    }

    #[test]
    fn pt_residual_balanced_vs_dissipative() {
        let p = params(0.5);
        assert!(pt_symmetry_residual(&p, 30, false) < 1e-15);
        assert!((pt_symmetry_residual(&p, 30, true) - 1.0).abs() < 1e-15);
        assert_eq!(pt_symmetry_residual(&params(0.0), 30, false), 0.0);
    }

    #[test]
    fn entropy_plateau_and_decay() {
        let c = FockCutoff::new(128, 1e-10).unwrap();
        // below the block EP the eigenstates are maximally entangled
        for gamma in [0.0, 0.05, 0.1, 0.19] {
            let s = eigenstate_entropy(&params(gamma), 0, Branch::Plus, &c).unwrap();
            assert!(
                (s / std::f64::consts::LN_2 - 1.0).abs() < 1e-10,
                "gamma={gamma}: S/ln2 = {}",
                s / std::f64::consts::LN_2
            );
        }
        // beyond it the entropy decreases strictly, identically for both branches
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let gamma = 0.2001 + 0.03 * k as f64;
            let p = params(gamma);
            let s_plus = eigenstate_entropy(&p, 0, Branch::Plus, &c).unwrap();
            let s_minus = eigenstate_entropy(&p, 0, Branch::Minus, &c).unwrap();
            assert!((s_plus - s_minus).abs() < 1e-9);
            assert!(s_plus < prev, "entropy not decreasing at gamma={gamma}");
            prev = s_plus;
        }
        // EP input is rejected
        assert!(matches!(
            eigenstate_entropy(&params(0.2), 0, Branch::Plus, &c),
            Err(FslError::EpUnresolvable { .. })
        ));
    }
}
