//! Stabilization time of the non-Hermitian bound effect, and the
//! balanced-vs-dissipative equivalence check.

use crate::dynamics::expansion::{expand_initial_state, ExpansionCoefficients};
use crate::dynamics::propagate::evolve_oracle;
use crate::dynamics::renormalize_fock;
use crate::error::{FslError, Result};
use crate::fock::{build_hamiltonian, FockCutoff, HamiltonianKind, ModelParams, SpinBosonState};
use crate::nonhermitian::{analytic_nh_spectrum, BiorthoEigenSystem, DEFAULT_EP_TOL};

/// Numerical criterion for "stabilized onto the bound state".
pub const DEFAULT_TAU_THRESHOLD: f64 = 0.999999;

/// Bound-state weight under the biorthogonal renormalization, valid at
/// exceptional points as well: the EP block enters the normalizer through
/// its polynomial Jordan amplitudes, which keeps the weights summing to one.
pub fn bound_projection(coeffs: &ExpansionCoefficients, sys: &BiorthoEigenSystem, t: f64) -> f64 {
    let gamma = sys.params.gamma();
    let log_bound = if coeffs.c0.norm_sqr() > 0.0 {
        2.0 * (coeffs.c0.norm().ln() + gamma * t)
    } else {
        f64::NEG_INFINITY
    };
    let mut log_terms = vec![log_bound];
    for (mc, mode) in coeffs.modes.iter().zip(&sys.modes) {
        if mc.c.norm_sqr() > 0.0 {
            log_terms.push(2.0 * (mc.c.norm().ln() + mode.eigenvalue.im * t));
        }
    }
    for ec in &coeffs.ep {
        let gt = gamma * t;
        let f1 = (num_complex::Complex64::new(1.0 - gt, 0.0)) * ec.c1
            - num_complex::Complex64::new(0.0, gt) * ec.c2;
        let f2 = -num_complex::Complex64::new(0.0, gt) * ec.c1
            + num_complex::Complex64::new(1.0 + gt, 0.0) * ec.c2;
        let w = f1.norm_sqr() + f2.norm_sqr();
        if w > 0.0 {
            log_terms.push(w.ln());
        }
    }
    let max = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return 0.0;
    }
    let z: f64 = log_terms.iter().map(|l| (l - max).exp()).sum();
    (log_bound - max).exp() / z
}

/// Smallest `tau` with `P_0(tau) > threshold`, located by a coarse scan
/// (step `0.5` in units of the dominant coupling) followed by bisection to
/// a resolution of `1e-3` in the same units.
///
/// Errors: [`FslError::ZeroOverlap`] when the initial state has no
/// bound-state component; [`FslError::NotReached`] when the threshold is
/// not crossed by `t_max`.
pub fn stabilization_time(
    psi0: &SpinBosonState,
    params: &ModelParams,
    threshold: f64,
    t_max: f64,
) -> Result<f64> {
    let valid = threshold.is_finite()
        && threshold > 0.0
        && threshold < 1.0
        && t_max.is_finite()
        && t_max > 0.0;
    if !valid {
        return Err(FslError::InvalidConfig(
            "stabilization needs 0 < threshold < 1 and t_max > 0".into(),
        ));
    }
    let policy = FockCutoff::for_model(params, psi0.max_occupied());
    let cutoff = if policy.n_max() >= psi0.cutoff().n_max() {
        policy
    } else {
        FockCutoff::new(psi0.cutoff().n_max(), policy.tail_tol())?
            .with_active_band(policy.n_active())
    };
    let sys = analytic_nh_spectrum(params, cutoff.n_active(), &cutoff, DEFAULT_EP_TOL)?;
    let coeffs = expand_initial_state(&psi0.embedded(cutoff)?, &sys)?;
    if coeffs.c0.norm() < 1e-150 {
        return Err(FslError::ZeroOverlap);
    }

    let p0 = |t: f64| bound_projection(&coeffs, &sys, t);
    if p0(0.0) > threshold {
        return Ok(0.0);
    }
    // time unit 1/j1 by convention; fall back to 1/j2 for an undriven chain
    let unit = if params.j1().abs() > 0.0 {
        params.j1().abs()
    } else {
        params.j2().abs()
    };
    let step = 0.5 / unit;
    let resolution = 1e-3 / unit;

    // first coarse grid point above the threshold
    let mut lo = 0.0f64;
    let mut hi = None;
    let mut k = 1usize;
    loop {
        let t = (k as f64 * step).min(t_max);
        if p0(t) > threshold {
            hi = Some(t);
            break;
        }
        lo = t;
        if t >= t_max {
            break;
        }
        k += 1;
    }
    let mut hi = hi.ok_or(FslError::NotReached { threshold, t_max })?;
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if p0(mid) > threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Outcome of propagating the same state under the balanced gain/loss and
/// the purely dissipative Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport {
    /// Max over sampled times of the L2 distance between the two
    /// Fock-renormalized states.
    pub max_state_distance: f64,
    /// Max deviation of the raw-norm ratio from the exact `e^(-gamma t)`
    /// factor, measured in log space.
    pub max_log_norm_mismatch: f64,
}

/// Evolve `psi0` under both Hamiltonian variants with the dense oracle and
/// compare: renormalized trajectories must coincide, raw norms must differ
/// by exactly `e^(-gamma t)`.
pub fn dissipative_equivalence(
    psi0: &SpinBosonState,
    params: &ModelParams,
    times: &[f64],
) -> Result<EquivalenceReport> {
    let cutoff = psi0.cutoff();
    let h_balanced = build_hamiltonian(params, cutoff, HamiltonianKind::BalancedGainLoss);
    let h_dissipative = build_hamiltonian(params, cutoff, HamiltonianKind::Dissipative);
    let balanced = evolve_oracle(psi0, &h_balanced, times)?;
    let dissipative = evolve_oracle(psi0, &h_dissipative, times)?;

    let mut report = EquivalenceReport {
        max_state_distance: 0.0,
        max_log_norm_mismatch: 0.0,
    };
    for ((t, b), (_, d)) in balanced.iter().zip(dissipative.iter()) {
        let distance = renormalize_fock(b)?.distance(&renormalize_fock(d)?);
        report.max_state_distance = report.max_state_distance.max(distance);
        let mismatch = (d.log_norm() - (b.log_norm() - params.gamma() * t)).abs();
        report.max_log_norm_mismatch = report.max_log_norm_mismatch.max(mismatch);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Spin;

    #[test]
    fn bound_state_stabilizes_immediately() {
        let p = ModelParams::new(1.0, 0.2, 0.15).unwrap();
        let c = FockCutoff::for_model(&p, 0);
        let psi = crate::fock::displaced_fock_state(p.alpha(), 0, Spin::Down, &c).unwrap();
        let tau = stabilization_time(&psi, &p, DEFAULT_TAU_THRESHOLD, 10.0).unwrap();
        assert_eq!(tau, 0.0);
    }

    #[test]
    fn zero_overlap_is_detected() {
        // spin-up Fock states are orthogonal to the bound state exactly
        let p = ModelParams::new(1.0, 0.2, 0.15).unwrap();
        let c = FockCutoff::for_model(&p, 10);
        let psi = SpinBosonState::basis_state(10, Spin::Up, c).unwrap();
        assert!(matches!(
            stabilization_time(&psi, &p, DEFAULT_TAU_THRESHOLD, 10.0),
            Err(FslError::ZeroOverlap)
        ));
    }

    #[test]
    fn not_reached_within_window() {
        let p = ModelParams::new(1.0, 0.2, 0.02).unwrap();
        let c = FockCutoff::for_model(&p, 10);
        let psi = SpinBosonState::basis_state(10, Spin::Down, c).unwrap();
        assert!(matches!(
            stabilization_time(&psi, &p, DEFAULT_TAU_THRESHOLD, 5.0),
            Err(FslError::NotReached { .. })
        ));
    }

    #[test]
    fn tau_decreases_with_rate_gap_in_ptb() {
        // the asymptotic rate gap 2 (gamma - sqrt(gamma^2 - j2^2)) shrinks as
        // gamma grows deep into the broken phase, so tau must grow
        let gaps: Vec<f64> = [0.4, 0.5, 0.6]
            .iter()
            .map(|g| 2.0 * (g - (g * g - 0.04f64).sqrt()))
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);

        let c = FockCutoff::for_model(&ModelParams::new(1.0, 0.2, 0.5).unwrap(), 10);
        let psi = SpinBosonState::basis_state(10, Spin::Down, c).unwrap();
        let tau = |gamma: f64| {
            let p = ModelParams::new(1.0, 0.2, gamma).unwrap();
            stabilization_time(&psi, &p, DEFAULT_TAU_THRESHOLD, 3000.0).unwrap()
        };
        let (t1, t2, t3) = (tau(0.4), tau(0.5), tau(0.6));
        assert!(t1 < t2 && t2 < t3, "tau not increasing: {t1}, {t2}, {t3}");
    }

    #[test]
    fn tau_is_finite_at_the_exceptional_point() {
        // gamma = j2 sqrt(4) = 0.4 puts block 3 exactly at its EP; the
        // Jordan amplitudes keep the projection well-defined.
        let p = ModelParams::new(1.0, 0.2, 0.4).unwrap();
        let c = FockCutoff::for_model(&p, 10);
        let psi = SpinBosonState::basis_state(10, Spin::Down, c).unwrap();
        let tau = stabilization_time(&psi, &p, DEFAULT_TAU_THRESHOLD, 2000.0).unwrap();
        assert!(tau > 0.0 && tau < 2000.0);
    }

    #[test]
    fn ptb_mode_competition_rate() {
        // deep in the broken phase the bound state wins at the closed-form
        // rate gap 2 (gamma - sqrt(gamma^2 - j2^2)) per unit time; measure it
        // from the late-time logit slope of the bound projection
        let p = ModelParams::new(1.0, 0.2, 0.5).unwrap();
        let gap = 2.0 * (0.5 - 0.21f64.sqrt());
        let c = FockCutoff::for_model(&p, 10);
        let psi = SpinBosonState::basis_state(10, Spin::Down, c).unwrap();
        let sys = crate::nonhermitian::analytic_nh_spectrum(
            &p,
            c.n_active(),
            &c,
            crate::nonhermitian::DEFAULT_EP_TOL,
        )
        .unwrap();
        let coeffs = crate::dynamics::expand_initial_state(&psi, &sys).unwrap();
        let logit = |t: f64| {
            let p0 = bound_projection(&coeffs, &sys, t);
            ((1.0 - p0) / p0).ln()
        };
        let measured = -(logit(140.0) - logit(100.0)) / 40.0;
        assert!(
            (measured - gap).abs() < 1e-3 * gap,
            "measured rate {measured}, closed form {gap}"
        );
    }

    #[test]
    fn equivalence_at_gamma_zero() {
        let p = ModelParams::new(1.0, 0.2, 0.0).unwrap();
        let c = FockCutoff::for_model(&p, 5);
        let psi = SpinBosonState::basis_state(5, Spin::Down, c).unwrap();
        let times: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let rep = dissipative_equivalence(&psi, &p, &times).unwrap();
        assert!(rep.max_state_distance < 1e-10);
        assert!(rep.max_log_norm_mismatch < 1e-10);
    }
}
