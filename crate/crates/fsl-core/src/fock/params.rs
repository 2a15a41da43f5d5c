//! Model parameters and Fock-space truncation.

use crate::error::{FslError, Result};

/// Couplings of the driven spin-boson chain (units with hbar = 1).
///
/// The displacement `alpha = -j1/j2` is always recomputed from the couplings,
/// never stored, so it cannot drift out of sync.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    j1: f64,
    j2: f64,
    gamma: f64,
}

impl ModelParams {
    /// `j2` must be nonzero (the displacement `-j1/j2` must exist) and
    /// `gamma` non-negative.
    pub fn new(j1: f64, j2: f64, gamma: f64) -> Result<Self> {
        if !j1.is_finite() || !j2.is_finite() || !gamma.is_finite() {
            return Err(FslError::InvalidConfig(
                "couplings must be finite".into(),
            ));
        }
        if j2 == 0.0 {
            return Err(FslError::InvalidConfig(
                "j2 must be nonzero so that alpha = -j1/j2 exists".into(),
            ));
        }
        if gamma < 0.0 {
            return Err(FslError::InvalidConfig(format!(
                "gamma must be non-negative, got {gamma}"
            )));
        }
        Ok(Self { j1, j2, gamma })
    }

    /// Hermitian model, `gamma = 0`.
    pub fn hermitian(j1: f64, j2: f64) -> Result<Self> {
        Self::new(j1, j2, 0.0)
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    pub fn j2(&self) -> f64 {
        self.j2
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Displacement mapping the driven chain onto the bare spin-boson ladder.
    pub fn alpha(&self) -> f64 {
        -self.j1 / self.j2
    }

    /// Intercell coupling `j2 * sqrt(n+1)` of unit cell `n`.
    pub fn intercell(&self, n: usize) -> f64 {
        self.j2 * ((n + 1) as f64).sqrt()
    }

    /// Same parameters with a different gain/loss rate.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.j1, self.j2, gamma)
    }
}

/// Tail mass left above the truncation boundary that we tolerate before a
/// displaced state is declared unrepresentable.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Truncation of the semi-infinite boson ladder.
///
/// `n_max` is the highest retained Fock index; the total basis dimension is
/// `2 * (n_max + 1)`. `n_active` is the declared active band: displaced
/// columns are tail-checked for indices up to `n_active`, and analytic
/// constructions must stay inside it. Constructed cutoffs default to
/// `n_active = n_max / 2`; [`FockCutoff::for_model`] declares the tighter
/// band it can actually guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCutoff {
    n_max: usize,
    tail_tol: f64,
    n_active: usize,
}

// Calibrated support margins for displaced Fock states D(alpha)|n>. The
// boson-number distribution is confined below the classical turning point
// (sqrt(n) + |alpha|)^2; the tail mass beyond turning + 28 is < 1e-10 and
// beyond turning + 48 is below f64 resolution for |alpha| <= 8.
const SUPPORT_MARGIN: usize = 48;

fn displaced_support(n: usize, alpha: f64) -> usize {
    let turning = ((n as f64).sqrt() + alpha.abs()).powi(2);
    turning.ceil() as usize + SUPPORT_MARGIN
}

impl FockCutoff {
    /// `tail_tol` must lie in (0, 1); the active band defaults to `n_max / 2`.
    pub fn new(n_max: usize, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(FslError::InvalidConfig(format!(
                "tail_tol must lie in (0, 1), got {tail_tol}"
            )));
        }
        // Keep the dense representation addressable: dim^2 complex entries.
        let dim = n_max
            .checked_add(1)
            .and_then(|d| d.checked_mul(2))
            .ok_or_else(|| FslError::InvalidConfig("n_max overflows the basis dimension".into()))?;
        if dim > 1 << 16 {
            return Err(FslError::InvalidConfig(format!(
                "n_max = {n_max} would need a dense dimension of {dim}; refusing"
            )));
        }
        Ok(Self {
            n_max,
            tail_tol,
            n_active: n_max / 2,
        })
    }

    /// Override the declared active band (capped at `n_max`).
    pub fn with_active_band(mut self, n_active: usize) -> Self {
        self.n_active = n_active.min(self.n_max);
        self
    }

    /// Cutoff policy for a model and the largest Fock index `n_init` occupied
    /// by the initial state.
    ///
    /// The band of displaced modes reached from `|n_init>` extends to the
    /// turning point `(sqrt(n_init) + |alpha|)^2` plus an Airy tail; the
    /// returned cutoff keeps every column of the displacement inside that
    /// band representable at `tail_tol`, and never shrinks below
    /// `max(128, 4 * ceil(alpha^2 + n_init))`.
    pub fn for_model(params: &ModelParams, n_init: usize) -> Self {
        let alpha = params.alpha();
        let band = displaced_support(n_init, alpha) + 2;
        let floor = 4.0 * (alpha * alpha + n_init as f64).ceil();
        let n_max = (displaced_support(band, alpha))
            .max(2 * band)
            .max(floor as usize)
            .max(128);
        Self {
            n_max,
            tail_tol: DEFAULT_TAIL_TOL,
            n_active: band.min(n_max / 2),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Declared active band: analytic constructions are validated only for
    /// Fock indices up to this bound.
    pub fn n_active(&self) -> usize {
        self.n_active
    }

    /// Total basis dimension `2 * (n_max + 1)` of the spin (x) Fock space.
    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    /// Number of retained boson levels, `n_max + 1`.
    pub fn boson_dim(&self) -> usize {
        self.n_max + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_is_recomputed() {
        let p = ModelParams::new(1.0, 0.2, 0.0).unwrap();
        assert_eq!(p.alpha(), -5.0);
        assert_eq!(p.with_gamma(0.3).unwrap().alpha(), -5.0);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.2, -0.1).is_err());
        assert!(ModelParams::new(f64::NAN, 0.2, 0.0).is_err());
        assert!(FockCutoff::new(10, 0.0).is_err());
        assert!(FockCutoff::new(10, 1.5).is_err());
    }

    #[test]
    fn cutoff_dimensions() {
        let c = FockCutoff::new(128, 1e-10).unwrap();
        assert_eq!(c.dim(), 258);
        assert_eq!(c.boson_dim(), 129);
        assert_eq!(c.n_active(), 64);
    }

    #[test]
    fn policy_is_self_consistent() {
        // The declared band must itself be representable: every column up to
        // n_active needs its support inside n_max.
        for (j1, j2, n_init) in [(1.0, 0.2, 50), (1.0, 0.2, 10), (0.0, 1.0, 0), (1.0, 0.5, 30)] {
            let p = ModelParams::new(j1, j2, 0.0).unwrap();
            let c = FockCutoff::for_model(&p, n_init);
            assert!(c.n_active() <= c.n_max() / 2);
            assert!(
                displaced_support(c.n_active(), p.alpha()) <= c.n_max(),
                "policy band {} not representable at n_max {}",
                c.n_active(),
                c.n_max()
            );
            // floor from the sizing rule
            assert!(c.n_max() >= 128);
            assert!(c.n_max() as f64 >= 4.0 * (p.alpha().powi(2) + n_init as f64).ceil());
        }
    }
}
