//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, FslError>;

#[derive(Debug, Error)]
pub enum FslError {
    /// Model or cutoff parameters violate a type invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A displacement column leaks past the truncation boundary.
    #[error(
        "cutoff too small: column {column} of D({alpha}) has norm deviation \
         {deviation:.3e} > tail tolerance {tail_tol:.3e} at n_max = {n_max}"
    )]
    CutoffTooSmall {
        alpha: f64,
        column: usize,
        deviation: f64,
        tail_tol: f64,
        n_max: usize,
    },

    /// A biorthogonal normalizer is numerically singular but the block was
    /// not flagged as an exceptional point: `ep_tol` is too tight.
    #[error(
        "subspace n = {n} is unresolvably close to an exceptional point \
         (|<L|R>| = {overlap:.3e}); widen ep_tol"
    )]
    EpUnresolvable { n: usize, overlap: f64 },

    /// Eigenmode projection probabilities are only defined for a
    /// diagonalizable spectrum.
    #[error("mode projections are undefined at an exceptional point (n_c = {0})")]
    EpProjectionUnsupported(usize),

    /// The retained eigenmodes do not span the initial state.
    #[error(
        "initial-state reconstruction residual {residual:.3e} exceeds {tol:.0e}; \
         increase n_levels or the cutoff"
    )]
    ReconstructionFailure { residual: f64, tol: f64 },

    /// Renormalization of a zero-norm state was requested.
    #[error("cannot renormalize a zero-norm state")]
    DegenerateState,

    /// Bound-state projection never crossed the threshold inside the search window.
    #[error("bound projection stayed <= {threshold} up to t = {t_max}")]
    NotReached { threshold: f64, t_max: f64 },

    /// Stabilization time is undefined for states orthogonal to the bound state.
    #[error("initial state has zero overlap with the bound state")]
    ZeroOverlap,

    /// Time stepping degenerated (repeated or non-increasing sample times).
    #[error("integrator stall: step size underflow near t = {0}")]
    IntegratorStall(f64),

    /// Dense linear algebra backend failure.
    #[error("linear algebra backend error: {0}")]
    Linalg(String),
}

impl From<ndarray_linalg::error::LinalgError> for FslError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        FslError::Linalg(e.to_string())
    }
}
