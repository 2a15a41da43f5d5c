//! Analytic and dense-oracle propagation.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::dynamics::expansion::ExpansionCoefficients;
use crate::dynamics::{NormalizationScheme, ScaledState, TimeSeries};
use crate::error::{FslError, Result};
use crate::fock::{OperatorMatrix, SpinBosonState};
use crate::linalg::expm;
use crate::nonhermitian::BiorthoEigenSystem;

/// Analytic propagation of an expanded state:
///
/// ```text
/// psi(t) = c0 e^(gamma t) |alpha,down>
///        + sum c_{n,g} e^(-i E_{n,g} t) |R_{n,g}>
///        + [(1 - gamma t) c1 - i gamma t c2] |phi_1(n_c)>
///        + [-i gamma t c1 + (1 + gamma t) c2] |phi_2(n_c)>
/// ```
///
/// Output states are raw (norm growth is physical); every record carries the
/// shared log-prefactor that keeps the amplitudes inside the floating-point
/// range at arbitrary `gamma t`.
pub fn evolve_analytic(
    coeffs: &ExpansionCoefficients,
    sys: &BiorthoEigenSystem,
    times: &[f64],
) -> Result<TimeSeries<ScaledState>> {
    if coeffs.modes.len() != sys.modes.len() || coeffs.ep.len() != sys.ep_blocks.len() {
        return Err(FslError::InvalidConfig(
            "expansion coefficients do not match the eigensystem".into(),
        ));
    }
    let gamma = sys.params.gamma();
    let minus_i = C64::new(0.0, -1.0);
    let records = times
        .iter()
        .map(|&t| {
            // shared prefactor: the largest log-magnitude among all terms
            let mut m = f64::NEG_INFINITY;
            if coeffs.c0 != C64::new(0.0, 0.0) {
                m = m.max(coeffs.c0.norm().ln() + gamma * t);
            }
            for (mc, mode) in coeffs.modes.iter().zip(&sys.modes) {
                if mc.c != C64::new(0.0, 0.0) {
                    m = m.max(mc.c.norm().ln() + mode.eigenvalue.im * t);
                }
            }
            for ec in &coeffs.ep {
                let mag = (ec.c1.norm() + ec.c2.norm()) * (1.0 + gamma * t.abs());
                if mag > 0.0 {
                    m = m.max(mag.ln());
                }
            }
            if m == f64::NEG_INFINITY {
                return ScaledState::new(0.0, SpinBosonState::zero(sys.cutoff));
            }

            let mut out = SpinBosonState::zero(sys.cutoff);
            if coeffs.c0 != C64::new(0.0, 0.0) {
                let w = coeffs.c0 * (gamma * t - m).exp();
                out.axpy(w, &sys.bound.right);
            }
            for (mc, mode) in coeffs.modes.iter().zip(&sys.modes) {
                if mc.c != C64::new(0.0, 0.0) {
                    let w = mc.c * (minus_i * mode.eigenvalue * t - m).exp();
                    out.axpy(w, &mode.right);
                }
            }
            for (ec, block) in coeffs.ep.iter().zip(&sys.ep_blocks) {
                let gt = C64::new(gamma * t, 0.0);
                let igt = C64::new(0.0, gamma * t);
                let f1 = (C64::new(1.0, 0.0) - gt) * ec.c1 - igt * ec.c2;
                let f2 = -igt * ec.c1 + (C64::new(1.0, 0.0) + gt) * ec.c2;
                let damp = (-m).exp();
                out.axpy(f1 * damp, &block.phi1);
                out.axpy(f2 * damp, &block.phi2);
            }
            ScaledState::new(m, out)
        })
        .collect();
    TimeSeries::new(times.to_vec(), records, NormalizationScheme::None)
}

/// Independent dense propagator: steps `i d psi/dt = H psi` with the
/// scaling-and-squaring matrix exponential of `-i H dt` per unique step
/// size. Deterministic, and entirely ignorant of the analytic eigensystem.
pub fn evolve_oracle(
    psi0: &SpinBosonState,
    h: &OperatorMatrix,
    times: &[f64],
) -> Result<TimeSeries<ScaledState>> {
    if psi0.dim() != h.dim() {
        return Err(FslError::InvalidConfig(
            "initial state and Hamiltonian use different cutoffs".into(),
        ));
    }
    // uniform grids reuse one propagator; keyed on the exact bit pattern
    let mut cache: Vec<(u64, ndarray::Array2<C64>)> = Vec::new();
    let mut current: Array1<C64> = psi0.amplitudes().clone();
    let mut log_weight = 0.0f64;
    let mut prev_t = 0.0f64;
    let mut records = Vec::with_capacity(times.len());

    for &t in times {
        let dt = t - prev_t;
        if dt != 0.0 {
            if prev_t + dt == prev_t {
                return Err(FslError::IntegratorStall(t));
            }
            let key = dt.to_bits();
            let pos = match cache.iter().position(|(k, _)| *k == key) {
                Some(p) => p,
                None => {
                    let gen = h.entries().mapv(|v| v * C64::new(0.0, -dt));
                    cache.push((key, expm(&gen)?));
                    cache.len() - 1
                }
            };
            current = cache[pos].1.dot(&current);
        }
        // keep amplitudes comfortably inside the floating-point range
        let norm = current.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 && !(1e-50..=1e50).contains(&norm) {
            current.mapv_inplace(|a| a / norm);
            log_weight += norm.ln();
        }
        records.push(ScaledState::new(
            log_weight,
            SpinBosonState::from_amplitudes(current.clone(), *psi0.cutoff())?,
        ));
        prev_t = t;
    }
    TimeSeries::new(times.to_vec(), records, NormalizationScheme::None)
}
