//! Dense operators on the truncated spin (x) Fock basis.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{FslError, Result};
use crate::fock::params::FockCutoff;
use crate::fock::state::{basis_index, Spin, SpinBosonState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTag {
    Hamiltonian,
    Displacement,
    Ladder,
    Spin,
    Other,
}

/// Dense complex square matrix on the `2 * (n_max + 1)` dimensional basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
    cutoff: FockCutoff,
    tag: OperatorTag,
}

impl OperatorMatrix {
    pub fn new(entries: Array2<C64>, cutoff: FockCutoff, tag: OperatorTag) -> Result<Self> {
        if entries.nrows() != cutoff.dim() || entries.ncols() != cutoff.dim() {
            return Err(FslError::InvalidConfig(format!(
                "operator shape {:?} does not match cutoff dimension {}",
                entries.dim(),
                cutoff.dim()
            )));
        }
        Ok(Self { entries, cutoff, tag })
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn cutoff(&self) -> &FockCutoff {
        &self.cutoff
    }

    pub fn tag(&self) -> OperatorTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|a| a.conj()),
            cutoff: self.cutoff,
            tag: self.tag,
        }
    }

    /// `max_ij | M - M^dagger |`; zero for Hermitian matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut max = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[[i, j]] - self.entries[[j, i]].conj()).norm();
                max = max.max(d);
            }
        }
        max
    }

    /// Matrix-vector application.
    pub fn apply(&self, state: &SpinBosonState) -> SpinBosonState {
        assert_eq!(self.dim(), state.dim(), "operator/state dimension mismatch");
        let out = self.entries.dot(state.amplitudes());
        SpinBosonState::from_amplitudes(out, *state.cutoff()).expect("dimension preserved")
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        Self {
            entries: self.entries.dot(&other.entries),
            cutoff: self.cutoff,
            tag: OperatorTag::Other,
        }
    }
}

/// Annihilation and creation operators `(a, a_dagger)` on the boson factor,
/// identity on spin.
///
/// `<n-1| a |n> = sqrt(n)`; the creation operator is the exact transpose, so
/// `a_dagger |n_max> = 0` by truncation.
pub fn build_ladder_ops(cutoff: &FockCutoff) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if cutoff.n_max() < 1 {
        return Err(FslError::InvalidConfig(
            "ladder operators need n_max >= 1".into(),
        ));
    }
    let dim = cutoff.dim();
    let mut a = Array2::<C64>::zeros((dim, dim));
    for n in 1..=cutoff.n_max() {
        let amp = C64::new((n as f64).sqrt(), 0.0);
        for spin in [Spin::Up, Spin::Down] {
            a[[basis_index(n - 1, spin), basis_index(n, spin)]] = amp;
        }
    }
    let adag = a.t().mapv(|x| x.conj());
    Ok((
        OperatorMatrix::new(a, *cutoff, OperatorTag::Ladder)?,
        OperatorMatrix::new(adag, *cutoff, OperatorTag::Ladder)?,
    ))
}

fn spin_op(cutoff: &FockCutoff, block: [[C64; 2]; 2]) -> OperatorMatrix {
    let dim = cutoff.dim();
    let mut m = Array2::<C64>::zeros((dim, dim));
    for n in 0..=cutoff.n_max() {
        for (r, row) in block.iter().enumerate() {
            for (c, val) in row.iter().enumerate() {
                if *val != C64::new(0.0, 0.0) {
                    m[[2 * n + r, 2 * n + c]] = *val;
                }
            }
        }
    }
    OperatorMatrix::new(m, *cutoff, OperatorTag::Spin).expect("square by construction")
}

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

pub fn spin_x(cutoff: &FockCutoff) -> OperatorMatrix {
    spin_op(cutoff, [[ZERO, ONE], [ONE, ZERO]])
}

pub fn spin_y(cutoff: &FockCutoff) -> OperatorMatrix {
    let i = C64::new(0.0, 1.0);
    spin_op(cutoff, [[ZERO, -i], [i, ZERO]])
}

pub fn spin_z(cutoff: &FockCutoff) -> OperatorMatrix {
    spin_op(cutoff, [[ONE, ZERO], [ZERO, -ONE]])
}

/// `sigma_+ = |up><down|`.
pub fn spin_plus(cutoff: &FockCutoff) -> OperatorMatrix {
    spin_op(cutoff, [[ZERO, ONE], [ZERO, ZERO]])
}

/// `sigma_- = |down><up|`.
pub fn spin_minus(cutoff: &FockCutoff) -> OperatorMatrix {
    spin_op(cutoff, [[ZERO, ZERO], [ONE, ZERO]])
}
