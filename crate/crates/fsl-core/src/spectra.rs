//! Hermitian eigensystem of the chain, zero-mode profiles, chiral-symmetry
//! checks, and the finite isotropic-chain reference solver.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{FslError, Result};
use crate::fock::displacement::{column_with_spin, displaced_columns};
use crate::fock::{FockCutoff, ModelParams, OperatorMatrix, Spin, SpinBosonState};
use crate::linalg::eigh_real;

/// One chiral pair of the analytic spectrum: energies `+- j2 sqrt(n+1)`.
#[derive(Debug, Clone)]
pub struct HermitianPair {
    pub n: usize,
    pub energy: f64,
    pub plus: SpinBosonState,
    pub minus: SpinBosonState,
}

/// Exact eigensystem: the zero mode `|alpha, down>` plus `n_levels` chiral
/// pairs `D(alpha) (|n,up> +- |n+1,down>) / sqrt(2)`.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub zero_mode: SpinBosonState,
    pub pairs: Vec<HermitianPair>,
    pub n_levels: usize,
}

/// Build the analytic eigensystem with pairs `n = 0 .. n_levels - 1`.
pub fn analytic_hermitian_spectrum(
    params: &ModelParams,
    n_levels: usize,
    cutoff: &FockCutoff,
) -> Result<HermitianEigenSystem> {
    if n_levels > cutoff.n_active() {
        return Err(FslError::InvalidConfig(format!(
            "n_levels = {n_levels} exceeds the active band {}",
            cutoff.n_active()
        )));
    }
    let alpha = params.alpha();
    let cols = displaced_columns(alpha, cutoff, n_levels)?;
    let zero_mode = column_with_spin(&cols[0], Spin::Down, cutoff);
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let pairs = (0..n_levels)
        .map(|n| {
            let up = column_with_spin(&cols[n], Spin::Up, cutoff);
            let down = column_with_spin(&cols[n + 1], Spin::Down, cutoff);
            let mut plus = up.clone();
            plus.axpy(C64::new(1.0, 0.0), &down);
            plus.scale(inv_sqrt2);
            let mut minus = up;
            minus.axpy(C64::new(-1.0, 0.0), &down);
            minus.scale(inv_sqrt2);
            HermitianPair {
                n,
                energy: params.intercell(n),
                plus,
                minus,
            }
        })
        .collect();
    Ok(HermitianEigenSystem {
        zero_mode,
        pairs,
        n_levels,
    })
}

/// Boson-number distribution `P(n) = |<n,down|alpha,down>|^2` of the zero
/// mode: a Poisson profile with mean `alpha^2`, edge-localized for
/// `|j1| < |j2|` and centered near `(j1/j2)^2` otherwise.
pub fn zero_mode_profile(params: &ModelParams, cutoff: &FockCutoff) -> Result<Vec<f64>> {
    let cols = displaced_columns(params.alpha(), cutoff, 0)?;
    Ok(cols[0].iter().map(|v| v * v).collect())
}

/// `max_ij | sigma_z H sigma_z + H |`.
///
/// Exactly zero for the Hermitian chain; `2 gamma` for the balanced
/// gain/loss variant (the anti-Hermitian diagonal commutes with the
/// chirality instead of anticommuting).
pub fn chiral_symmetry_residual(h: &OperatorMatrix) -> f64 {
    let mut max = 0.0f64;
    for ((i, j), v) in h.entries().indexed_iter() {
        // sigma_z H sigma_z flips the sign of mixed-spin entries only.
        if i % 2 == j % 2 {
            max = max.max(2.0 * v.norm());
        }
    }
    max
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSide {
    Left,
    Right,
    Delocalized,
}

impl std::fmt::Display for EdgeSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EdgeSide::Left => write!(f, "left"),
            EdgeSide::Right => write!(f, "right"),
            EdgeSide::Delocalized => write!(f, "delocalized"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EdgeState {
    pub side: EdgeSide,
    pub energy: f64,
    /// Site amplitudes along the chain (length `2 * cells`).
    pub amplitudes: Vec<f64>,
    /// Probability weight on the left half-chain.
    pub left_weight: f64,
}

/// Spectrum of the finite isotropic chain under open boundary conditions.
#[derive(Debug, Clone)]
pub struct IsotropicChainSpectrum {
    pub cells: usize,
    /// All `2 * cells` eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Indices into `eigenvalues` with `|E| < gap / 100`.
    pub zero_mode_indices: Vec<usize>,
    pub edge_states: Vec<EdgeState>,
    /// Gap closed (or chain too short): zero modes were not classified.
    pub degenerate_chain: bool,
}

/// A state counts as edge-localized when more than 90% of its probability
/// sits in one half-chain.
const EDGE_WEIGHT_THRESHOLD: f64 = 0.9;

/// Diagonalize the isotropic SSH chain: `cells` unit cells, alternating
/// hoppings `j1` (intracell) and constant `j2` (intercell), open boundaries.
pub fn isotropic_ssh_spectrum(j1: f64, j2: f64, cells: usize) -> Result<IsotropicChainSpectrum> {
    if cells < 2 {
        return Err(FslError::InvalidConfig(format!(
            "isotropic chain needs at least 2 cells, got {cells}"
        )));
    }
    let sites = 2 * cells;
    let mut m = Array2::<f64>::zeros((sites, sites));
    for s in 0..sites - 1 {
        let hop = if s % 2 == 0 { j1 } else { j2 };
        m[[s, s + 1]] = hop;
        m[[s + 1, s]] = hop;
    }
    let (eigenvalues, vectors) = eigh_real(&m)?;

    let gap = 2.0 * (j1.abs() - j2.abs()).abs();
    let scale = j1.abs().max(j2.abs());
    let degenerate_chain = cells < 3 || gap <= 1e-12 * scale;

    let mut zero_mode_indices = Vec::new();
    let mut edge_states = Vec::new();
    if !degenerate_chain {
        zero_mode_indices = (0..sites)
            .filter(|&i| eigenvalues[i].abs() < gap / 100.0)
            .collect();

        let half = sites / 2;
        let left_weight = |v: &[f64]| -> f64 { v[..half].iter().map(|x| x * x).sum() };
        let classify = |v: Vec<f64>, energy: f64| -> EdgeState {
            let w = left_weight(&v);
            let side = if w > EDGE_WEIGHT_THRESHOLD {
                EdgeSide::Left
            } else if w < 1.0 - EDGE_WEIGHT_THRESHOLD {
                EdgeSide::Right
            } else {
                EdgeSide::Delocalized
            };
            EdgeState {
                side,
                energy,
                amplitudes: v,
                left_weight: w,
            }
        };

        if zero_mode_indices.len() == 2 {
            // A numerically degenerate pair comes out in an arbitrary basis of
            // its eigenspace; rotate to the extremal-localization combinations
            // before classifying.
            let u: Vec<f64> = vectors.column(zero_mode_indices[0]).to_vec();
            let v: Vec<f64> = vectors.column(zero_mode_indices[1]).to_vec();
            let wuu: f64 = u[..half].iter().map(|x| x * x).sum();
            let wvv: f64 = v[..half].iter().map(|x| x * x).sum();
            let wuv: f64 = u[..half].iter().zip(&v[..half]).map(|(a, b)| a * b).sum();
            // eigenvectors of [[wuu, wuv], [wuv, wvv]]
            let tr = wuu + wvv;
            let disc = ((wuu - wvv) * 0.5).hypot(wuv);
            let lams = [tr * 0.5 + disc, tr * 0.5 - disc];
            for (k, lam) in lams.iter().enumerate() {
                let (c1, c2) = if wuv.abs() > 1e-14 {
                    let t = (lam - wuu) / wuv;
                    let norm = (1.0 + t * t).sqrt();
                    (1.0 / norm, t / norm)
                } else if (k == 0) == (wuu >= wvv) {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                };
                let rotated: Vec<f64> =
                    u.iter().zip(&v).map(|(a, b)| c1 * a + c2 * b).collect();
                let energy = eigenvalues[zero_mode_indices[k]];
                edge_states.push(classify(rotated, energy));
            }
        } else {
            for &i in &zero_mode_indices {
                edge_states.push(classify(vectors.column(i).to_vec(), eigenvalues[i]));
            }
        }
    }

    Ok(IsotropicChainSpectrum {
        cells,
        eigenvalues,
        zero_mode_indices,
        edge_states,
        degenerate_chain,
    })
}

/// Eigenvalues of a dense (complex-stored, real symmetric) Hamiltonian,
/// ascending. Used as the numeric cross-check for the analytic spectrum.
pub fn dense_hermitian_eigenvalues(h: &OperatorMatrix) -> Result<Vec<f64>> {
    Ok(eigh_real(&real_part(h)?)?.0)
}

/// Dense eigenvalues of the physical sector only: the hard truncation at
/// `n_max` acts as a second chain end and hosts its own near-zero edge
/// state, so eigenpairs with most of their weight above `band` are
/// truncation artifacts and are dropped before comparing against the
/// semi-infinite analytic ladder.
pub fn trusted_hermitian_eigenvalues(h: &OperatorMatrix, band: usize) -> Result<Vec<f64>> {
    let (vals, vecs) = eigh_real(&real_part(h)?)?;
    let split = h.cutoff().dim().min(2 * (band + 1));
    Ok(vals
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let inside: f64 = vecs.column(*i).iter().take(split).map(|v| v * v).sum();
            inside >= 0.5
        })
        .map(|(_, e)| *e)
        .collect())
}

fn real_part(h: &OperatorMatrix) -> Result<Array2<f64>> {
    let n = h.dim();
    let mut m = Array2::<f64>::zeros((n, n));
    let mut max_im = 0.0f64;
    for ((i, j), v) in h.entries().indexed_iter() {
        m[[i, j]] = v.re;
        max_im = max_im.max(v.im.abs());
    }
    if max_im > 0.0 {
        return Err(FslError::InvalidConfig(
            "dense Hermitian spectrum requested for a non-real matrix".into(),
        ));
    }
    Ok(m)
}
