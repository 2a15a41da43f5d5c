//! Time evolution: analytic biorthogonal propagation (including the Jordan
//! branch at exceptional points), an independent dense propagator oracle,
//! both renormalization schemes, observables, and the stabilization time of
//! the non-Hermitian bound effect.

pub mod expansion;
pub mod observables;
pub mod propagate;
pub mod stabilization;

pub use expansion::{
    expand_initial_state, EpCoefficients, ExpansionCoefficients, ModeCoefficient,
    RECONSTRUCTION_TOL,
};
pub use observables::{
    eigenmode_projections, fock_observables, observable_record, reduced_spin_entropy,
    ModeProjections, ObservableRecord, ObservableSummary,
};
pub use propagate::{evolve_analytic, evolve_oracle};
pub use stabilization::{
    bound_projection, dissipative_equivalence, stabilization_time, EquivalenceReport,
    DEFAULT_TAU_THRESHOLD,
};

use crate::error::{FslError, Result};
use crate::fock::{FockCutoff, ModelParams, Spin, SpinBosonState};

/// Which completeness relation a series of records was renormalized against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationScheme {
    /// Orthonormal Fock basis: conventional L2 normalization.
    Fock,
    /// Biorthogonal eigenbasis: associated-state weights.
    Biorthogonal,
    /// Raw propagation output; norms carry physical growth.
    None,
}

/// A state with a tracked logarithmic prefactor: the physical amplitudes are
/// `exp(log_weight) * state`. Exponential gain drives raw norms past the
/// floating-point range long before the dynamics get boring, so the growth
/// lives in `log_weight` and renormalized quantities become exact ratios.
#[derive(Debug, Clone)]
pub struct ScaledState {
    log_weight: f64,
    state: SpinBosonState,
}

impl ScaledState {
    pub fn new(log_weight: f64, state: SpinBosonState) -> Self {
        Self { log_weight, state }
    }

    pub fn log_weight(&self) -> f64 {
        self.log_weight
    }

    pub fn state(&self) -> &SpinBosonState {
        &self.state
    }

    /// `ln || exp(log_weight) * state ||`; `-inf` for the zero state.
    pub fn log_norm(&self) -> f64 {
        let n = self.state.norm();
        if n == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.log_weight + n.ln()
        }
    }
}

/// Conventional L2 renormalization of a raw state; the tracked prefactor
/// cancels. Errors on a zero-norm state.
pub fn renormalize_fock(raw: &ScaledState) -> Result<SpinBosonState> {
    raw.state.normalized()
}

/// Ordered samples of a propagation run.
#[derive(Debug, Clone)]
pub struct TimeSeries<T> {
    times: Vec<f64>,
    records: Vec<T>,
    normalization: NormalizationScheme,
}

impl<T> TimeSeries<T> {
    /// Times must be strictly increasing and match the record count.
    pub fn new(times: Vec<f64>, records: Vec<T>, normalization: NormalizationScheme) -> Result<Self> {
        if times.len() != records.len() {
            return Err(FslError::InvalidConfig(format!(
                "{} times vs {} records",
                times.len(),
                records.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FslError::InvalidConfig(
                "sample times must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            times,
            records,
            normalization,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn records(&self) -> &[T] {
        &self.records
    }

    pub fn normalization(&self) -> NormalizationScheme {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &T)> {
        self.times.iter().copied().zip(self.records.iter())
    }

    /// Re-tag the series after mapping its records.
    pub fn map<U>(
        &self,
        normalization: NormalizationScheme,
        mut f: impl FnMut(f64, &T) -> U,
    ) -> TimeSeries<U> {
        TimeSeries {
            times: self.times.clone(),
            records: self.iter().map(|(t, r)| f(t, r)).collect(),
            normalization,
        }
    }
}

/// Initial-state specification, resolved against a model and cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// Bare `|n, spin>`.
    Fock { n: usize, spin: Spin },
    /// Coherent state `D(alpha)|0> (x) |spin>` for an arbitrary real alpha.
    Coherent { alpha: f64, spin: Spin },
    /// `D(alpha_model)|n> (x) |spin>` in the model's own displaced basis.
    DisplacedFock { n: usize, spin: Spin },
}

impl InitialState {
    /// Largest Fock index the state occupies appreciably; feeds the cutoff
    /// sizing policy.
    pub fn n_init_estimate(&self, model_alpha: f64) -> usize {
        match self {
            InitialState::Fock { n, .. } => *n,
            InitialState::Coherent { alpha, .. } => {
                (alpha * alpha + 6.0 * alpha.abs() + 8.0).ceil() as usize
            }
            InitialState::DisplacedFock { n, .. } => {
                (((*n as f64).sqrt() + model_alpha.abs()).powi(2) + 8.0).ceil() as usize
            }
        }
    }

    pub fn realize(&self, params: &ModelParams, cutoff: &FockCutoff) -> Result<SpinBosonState> {
        match self {
            InitialState::Fock { n, spin } => SpinBosonState::basis_state(*n, *spin, *cutoff),
            InitialState::Coherent { alpha, spin } => {
                crate::fock::displaced_fock_state(*alpha, 0, *spin, cutoff)
            }
            InitialState::DisplacedFock { n, spin } => {
                crate::fock::displaced_fock_state(params.alpha(), *n, *spin, cutoff)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    fn small_state(scale: f64) -> ScaledState {
        let cutoff = FockCutoff::new(4, 1e-10).unwrap();
        let amps = Array1::from_vec(vec![
            C64::new(0.6 * scale, 0.0),
            C64::new(0.0, 0.8 * scale),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        ScaledState::new(3.0, SpinBosonState::from_amplitudes(amps, cutoff).unwrap())
    }

    #[test]
    fn renormalize_is_scale_invariant() {
        let a = renormalize_fock(&small_state(1.0)).unwrap();
        let b = renormalize_fock(&small_state(7.0)).unwrap();
        assert!(a.distance(&b) < 1e-15);
        assert!(a.is_normalized());
        // already-normalized input is unchanged
        let c = renormalize_fock(&ScaledState::new(0.0, a.clone())).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn zero_state_is_degenerate() {
        let cutoff = FockCutoff::new(4, 1e-10).unwrap();
        let zero = ScaledState::new(0.0, SpinBosonState::zero(cutoff));
        assert!(matches!(
            renormalize_fock(&zero),
            Err(FslError::DegenerateState)
        ));
        assert_eq!(zero.log_norm(), f64::NEG_INFINITY);
    }

    #[test]
    fn time_series_invariants() {
        let ok = TimeSeries::new(vec![0.0, 1.0], vec![1, 2], NormalizationScheme::None);
        assert!(ok.is_ok());
        assert!(TimeSeries::new(vec![0.0, 0.0], vec![1, 2], NormalizationScheme::None).is_err());
        assert!(TimeSeries::new(vec![0.0], vec![1, 2], NormalizationScheme::None).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Positive rescaling and any log prefactor leave the renormalized
        /// state untouched.
        #[test]
        fn renormalization_forgets_prefactors(scale in 1e-3f64..1e3, logw in -50.0f64..50.0) {
            let base = small_state(1.0);
            let scaled = ScaledState::new(
                logw,
                SpinBosonState::from_amplitudes(
                    base.state().amplitudes().mapv(|a| a * scale),
                    *base.state().cutoff(),
                )
                .unwrap(),
            );
            let a = renormalize_fock(&base).unwrap();
            let b = renormalize_fock(&scaled).unwrap();
            prop_assert!(a.distance(&b) < 1e-12);
        }
    }
}
