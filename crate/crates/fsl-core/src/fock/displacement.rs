//! Displacement operators and displaced Fock states.
//!
//! Two independent construction paths exist. The canonical one evaluates the
//! closed-form matrix elements
//!
//! ```text
//! <m| D(alpha) |n> = sqrt(n!/m!) alpha^(m-n) e^(-alpha^2/2) L_n^(m-n)(alpha^2),   m >= n,
//! ```
//!
//! with the `m < n` block filled from `<m|D|n> = (-1)^(n-m) <n|D|m>` (real
//! `alpha` only). The second path exponentiates `alpha (a_dag - a)` on the
//! truncated space and serves as a validator for the first.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{FslError, Result};
use crate::fock::operators::{build_ladder_ops, OperatorMatrix, OperatorTag};
use crate::fock::params::FockCutoff;
use crate::fock::state::{basis_index, Spin, SpinBosonState};
use crate::linalg::expm;

/// Displacement matrix on the boson factor alone, `(n_max+1)` square.
///
/// For real `alpha` the matrix is real orthogonal (up to truncation at the
/// top edge). Factorial ratios and powers of `alpha` are combined in log
/// space so entries far from the diagonal neither overflow nor lose their
/// Laguerre sign; the generalized Laguerre values come from the three-term
/// recurrence in the degree, which is stable for non-negative order.
pub fn displacement_boson_matrix(alpha: f64, cutoff: &FockCutoff) -> Array2<f64> {
    let nb = cutoff.boson_dim();
    let mut d = Array2::<f64>::zeros((nb, nb));
    if alpha == 0.0 {
        for i in 0..nb {
            d[[i, i]] = 1.0;
        }
        return d;
    }

    let x = alpha * alpha;
    let ln_abs = alpha.abs().ln();
    let neg = alpha < 0.0;

    // log-factorials via a cumulative sum; naive factorials overflow past 170!.
    let mut lf = vec![0.0f64; nb];
    for i in 1..nb {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }

    // One diagonal offset k = m - n at a time; the recurrence runs over the
    // degree n of L_n^(k)(x). A shared rescaling offset guards against
    // overflow of the raw Laguerre values at extreme (n, k).
    for k in 0..nb {
        let kf = k as f64;
        let mut l_prev = 0.0f64; // L_{-1}
        let mut l_cur = 1.0f64; // L_0
        let mut log_rescale = 0.0f64;
        for n in 0..nb - k {
            if n >= 1 {
                let nn = n as f64;
                let l_next =
                    ((2.0 * nn - 1.0 + kf - x) * l_cur - (nn - 1.0 + kf) * l_prev) / nn;
                l_prev = l_cur;
                l_cur = l_next;
                if l_cur.abs() > 1e270 {
                    l_prev *= 1e-270;
                    l_cur *= 1e-270;
                    log_rescale += 270.0 * std::f64::consts::LN_10;
                }
            }
            let m = n + k;
            let log_pref = 0.5 * (lf[n] - lf[m]) + kf * ln_abs - 0.5 * x + log_rescale;
            let mut val = log_pref.exp() * l_cur;
            if neg && k % 2 == 1 {
                val = -val;
            }
            d[[m, n]] = val;
            if k > 0 {
                // <n|D|m> = (-1)^(m-n) <m|D|n> for real alpha
                d[[n, m]] = if k % 2 == 0 { val } else { -val };
            }
        }
    }
    d
}

/// Tail-check columns `0 ..= band` of a boson-space displacement matrix:
/// every checked column must be normalized within `tail_tol`.
fn check_columns(d: &Array2<f64>, alpha: f64, cutoff: &FockCutoff, band: usize) -> Result<()> {
    for col in 0..=band.min(cutoff.n_max()) {
        let norm: f64 = d.column(col).iter().map(|v| v * v).sum::<f64>().sqrt();
        let deviation = (norm - 1.0).abs();
        if deviation > cutoff.tail_tol() {
            return Err(FslError::CutoffTooSmall {
                alpha,
                column: col,
                deviation,
                tail_tol: cutoff.tail_tol(),
                n_max: cutoff.n_max(),
            });
        }
    }
    Ok(())
}

fn embed_on_spin(d: &Array2<f64>, cutoff: &FockCutoff) -> OperatorMatrix {
    let dim = cutoff.dim();
    let mut full = Array2::<C64>::zeros((dim, dim));
    for ((m, n), v) in d.indexed_iter() {
        if *v != 0.0 {
            full[[2 * m, 2 * n]] = C64::new(*v, 0.0);
            full[[2 * m + 1, 2 * n + 1]] = C64::new(*v, 0.0);
        }
    }
    OperatorMatrix::new(full, *cutoff, OperatorTag::Displacement).expect("square by construction")
}

/// `D(alpha)` on the full space (identity on spin), canonical Laguerre path.
///
/// Columns inside the declared active band are tail-checked; a column whose
/// norm deviates beyond `tail_tol` aborts with [`FslError::CutoffTooSmall`]
/// naming it.
pub fn build_displacement(alpha: f64, cutoff: &FockCutoff) -> Result<OperatorMatrix> {
    let d = displacement_boson_matrix(alpha, cutoff);
    check_columns(&d, alpha, cutoff, cutoff.n_active())?;
    Ok(embed_on_spin(&d, cutoff))
}

/// Validator path: `exp(alpha (a_dag - a))` on the truncated space.
pub fn build_displacement_expm(alpha: f64, cutoff: &FockCutoff) -> Result<OperatorMatrix> {
    let (a, adag) = build_ladder_ops(cutoff)?;
    let gen = (adag.entries() - a.entries()).mapv(|v| v * alpha);
    let e = expm(&gen)?;
    OperatorMatrix::new(e, *cutoff, OperatorTag::Displacement)
}

/// `D(alpha) |n> (x) |spin>`, normalized to unit norm after the tail check.
pub fn displaced_fock_state(
    alpha: f64,
    n: usize,
    spin: Spin,
    cutoff: &FockCutoff,
) -> Result<SpinBosonState> {
    if n > cutoff.n_active() {
        return Err(FslError::InvalidConfig(format!(
            "displaced index {n} is outside the active band {}",
            cutoff.n_active()
        )));
    }
    let d = displacement_boson_matrix(alpha, cutoff);
    check_columns(&d, alpha, cutoff, n)?;
    let mut amplitudes = Array1::<C64>::zeros(cutoff.dim());
    for m in 0..cutoff.boson_dim() {
        amplitudes[basis_index(m, spin)] = C64::new(d[[m, n]], 0.0);
    }
    SpinBosonState::from_amplitudes(amplitudes, *cutoff)?.normalized()
}

/// All displaced boson columns `0 ..= band` at once, tail-checked and
/// renormalized; used by the eigensystem builders to avoid re-deriving the
/// matrix per state.
pub(crate) fn displaced_columns(
    alpha: f64,
    cutoff: &FockCutoff,
    band: usize,
) -> Result<Vec<Array1<f64>>> {
    let d = displacement_boson_matrix(alpha, cutoff);
    check_columns(&d, alpha, cutoff, band)?;
    Ok((0..=band)
        .map(|col| {
            let c = d.column(col).to_owned();
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            c / norm
        })
        .collect())
}

/// Promote a boson-space column to a full spin-boson state.
pub(crate) fn column_with_spin(
    column: &Array1<f64>,
    spin: Spin,
    cutoff: &FockCutoff,
) -> SpinBosonState {
    let mut amplitudes = Array1::<C64>::zeros(cutoff.dim());
    for (m, v) in column.iter().enumerate() {
        amplitudes[basis_index(m, spin)] = C64::new(*v, 0.0);
    }
    SpinBosonState::from_amplitudes(amplitudes, *cutoff).expect("dimension preserved")
}

/// Largest band `b <= n_active` such that every column `0 ..= b` of
/// `D(alpha)` passes the tail check at this cutoff. Returns `None` when even
/// column 0 leaks.
pub fn certified_band(alpha: f64, cutoff: &FockCutoff) -> Option<usize> {
    let d = displacement_boson_matrix(alpha, cutoff);
    let mut band = None;
    for col in 0..=cutoff.n_active() {
        let norm: f64 = d.column(col).iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > cutoff.tail_tol() {
            break;
        }
        band = Some(col);
    }
    band
}
