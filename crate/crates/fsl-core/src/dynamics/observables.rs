//! Observables of renormalized states and eigenmode projection weights.

use crate::dynamics::expansion::ExpansionCoefficients;
use crate::dynamics::ScaledState;
use crate::error::{FslError, Result};
use crate::fock::{Spin, SpinBosonState};
use crate::nonhermitian::{BiorthoEigenSystem, Branch};

/// Von Neumann entropy (natural log) of the reduced spin state. For a pure
/// bipartite state this equals the boson-side entanglement entropy, so the
/// 2x2 side is the cheap one to diagonalize.
pub fn reduced_spin_entropy(state: &SpinBosonState) -> f64 {
    let mut r_uu = 0.0f64;
    let mut r_dd = 0.0f64;
    let mut r_ud = num_complex::Complex64::new(0.0, 0.0);
    for n in 0..=state.cutoff().n_max() {
        let up = state.amp(n, Spin::Up);
        let down = state.amp(n, Spin::Down);
        r_uu += up.norm_sqr();
        r_dd += down.norm_sqr();
        r_ud += up * down.conj();
    }
    let mid = 0.5 * (r_uu + r_dd);
    let split = (0.5 * (r_uu - r_dd)).hypot(r_ud.norm());
    let entropy_term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    entropy_term((mid + split).min(1.0)) + entropy_term((mid - split).max(0.0))
}

/// Fock-basis observables of a normalized state.
#[derive(Debug, Clone)]
pub struct ObservableSummary {
    /// `P_n = |<n,up|psi>|^2 + |<n,down|psi>|^2`.
    pub boson_dist: Vec<f64>,
    /// `<n> = sum n P_n`.
    pub mean_n: f64,
    /// Spin-boson entanglement entropy, natural log.
    pub entropy: f64,
}

/// Boson distribution, mean occupation, and entanglement entropy. The input
/// must be normalized (use [`crate::dynamics::renormalize_fock`] first).
pub fn fock_observables(state: &SpinBosonState) -> ObservableSummary {
    assert!(
        state.is_normalized(),
        "fock_observables expects a normalized state, |psi| = {}",
        state.norm()
    );
    let boson_dist: Vec<f64> = (0..=state.cutoff().n_max())
        .map(|n| state.boson_occupation(n))
        .collect();
    let mean_n = boson_dist
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum();
    ObservableSummary {
        boson_dist,
        mean_n,
        entropy: reduced_spin_entropy(state),
    }
}

/// Relative eigenmode weights of the evolved state at time `t` under the
/// biorthogonal (associated-state) renormalization:
///
/// ```text
/// P_0(t)     = |c0|^2 e^(2 gamma t) / Z(t),
/// P_{n,g}(t) = |c_{n,g}|^2 e^(2 Im(E_{n,g}) t) / Z(t),
/// ```
///
/// with `Z` the sum of all numerators, evaluated in log space. The weights
/// are real, non-negative, and sum to one.
#[derive(Debug, Clone)]
pub struct ModeProjections {
    pub p_bound: f64,
    pub p_modes: Vec<(usize, Branch, f64)>,
}

pub fn eigenmode_projections(
    coeffs: &ExpansionCoefficients,
    sys: &BiorthoEigenSystem,
    t: f64,
) -> Result<ModeProjections> {
    if let Some(block) = sys.ep_blocks.first() {
        return Err(FslError::EpProjectionUnsupported(block.n));
    }
    let gamma = sys.params.gamma();
    let log_num_bound = if coeffs.c0.norm_sqr() > 0.0 {
        2.0 * (coeffs.c0.norm().ln() + gamma * t)
    } else {
        f64::NEG_INFINITY
    };
    let log_nums: Vec<f64> = coeffs
        .modes
        .iter()
        .zip(&sys.modes)
        .map(|(mc, mode)| {
            if mc.c.norm_sqr() > 0.0 {
                2.0 * (mc.c.norm().ln() + mode.eigenvalue.im * t)
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();

    let max = log_nums
        .iter()
        .copied()
        .fold(log_num_bound, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(FslError::DegenerateState);
    }
    let num_bound = (log_num_bound - max).exp();
    let nums: Vec<f64> = log_nums.iter().map(|l| (l - max).exp()).collect();
    let z = num_bound + nums.iter().sum::<f64>();
    Ok(ModeProjections {
        p_bound: num_bound / z,
        p_modes: coeffs
            .modes
            .iter()
            .zip(nums)
            .map(|(mc, w)| (mc.n, mc.branch, w / z))
            .collect(),
    })
}

/// Per-time payload combining both renormalization schemes: the boson
/// distribution, mean occupation, and entropy from the Fock-renormalized
/// state; the mode weights (when supplied) from the biorthogonal scheme.
#[derive(Debug, Clone)]
pub struct ObservableRecord {
    pub boson_dist: Vec<f64>,
    pub mean_n: f64,
    pub entropy: f64,
    pub p_bound: Option<f64>,
    pub p_modes: Vec<(usize, Branch, f64)>,
}

pub fn observable_record(
    raw: &ScaledState,
    projections: Option<&ModeProjections>,
) -> Result<ObservableRecord> {
    let normalized = crate::dynamics::renormalize_fock(raw)?;
    let summary = fock_observables(&normalized);
    Ok(ObservableRecord {
        boson_dist: summary.boson_dist,
        mean_n: summary.mean_n,
        entropy: summary.entropy,
        p_bound: projections.map(|p| p.p_bound),
        p_modes: projections.map(|p| p.p_modes.clone()).unwrap_or_default(),
    })
}
