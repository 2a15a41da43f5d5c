//! States on the truncated spin (x) Fock basis.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{FslError, Result};
use crate::fock::params::FockCutoff;

/// States labeled "normalized" must satisfy `| <psi|psi> - 1 | < 1e-12`.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// Chirality eigenvalue: +1 for up, -1 for down.
    pub fn sign(&self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

impl std::fmt::Display for Spin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Spin::Up => write!(f, "up"),
            Spin::Down => write!(f, "down"),
        }
    }
}

/// Complex amplitude vector over `{ |n,up>, |n,down> : 0 <= n <= n_max }`.
///
/// The index layout is fixed: `index(n, up) = 2n`, `index(n, down) = 2n + 1`
/// (spin fastest), so consecutive index pairs are consecutive unit cells of
/// the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinBosonState {
    amplitudes: Array1<C64>,
    cutoff: FockCutoff,
}

/// Flat index of `|n, spin>`.
pub fn basis_index(n: usize, spin: Spin) -> usize {
    2 * n
        + match spin {
            Spin::Up => 0,
            Spin::Down => 1,
        }
}

impl SpinBosonState {
    /// Wrap an amplitude vector; its length must equal `cutoff.dim()`.
    pub fn from_amplitudes(amplitudes: Array1<C64>, cutoff: FockCutoff) -> Result<Self> {
        if amplitudes.len() != cutoff.dim() {
            return Err(FslError::InvalidConfig(format!(
                "amplitude vector has length {}, cutoff dimension is {}",
                amplitudes.len(),
                cutoff.dim()
            )));
        }
        Ok(Self { amplitudes, cutoff })
    }

    /// The basis state `|n, spin>`.
    pub fn basis_state(n: usize, spin: Spin, cutoff: FockCutoff) -> Result<Self> {
        if n > cutoff.n_max() {
            return Err(FslError::InvalidConfig(format!(
                "Fock index {n} exceeds n_max = {}",
                cutoff.n_max()
            )));
        }
        let mut amplitudes = Array1::zeros(cutoff.dim());
        amplitudes[basis_index(n, spin)] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes, cutoff })
    }

    pub fn zero(cutoff: FockCutoff) -> Self {
        Self {
            amplitudes: Array1::zeros(cutoff.dim()),
            cutoff,
        }
    }

    pub fn cutoff(&self) -> &FockCutoff {
        &self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut Array1<C64> {
        &mut self.amplitudes
    }

    pub fn amp(&self, n: usize, spin: Spin) -> C64 {
        self.amplitudes[basis_index(n, spin)]
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.inner(self).re - 1.0).abs() < NORM_TOL
    }

    /// Conventional L2 normalization. Errors on a zero-norm state.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(FslError::DegenerateState);
        }
        Ok(Self {
            amplitudes: self.amplitudes.mapv(|a| a / n),
            cutoff: self.cutoff,
        })
    }

    /// Occupation of boson level `n`, summed over spin.
    pub fn boson_occupation(&self, n: usize) -> f64 {
        self.amp(n, Spin::Up).norm_sqr() + self.amp(n, Spin::Down).norm_sqr()
    }

    /// Highest Fock index with any support, or 0 for the zero vector.
    pub fn max_occupied(&self) -> usize {
        (0..=self.cutoff.n_max())
            .rev()
            .find(|&n| self.boson_occupation(n) > 0.0)
            .unwrap_or(0)
    }

    /// Zero-pad onto a larger cutoff. Truncation onto a smaller cutoff is
    /// refused if it would cut off more than the tail tolerance in mass.
    pub fn embedded(&self, target: FockCutoff) -> Result<Self> {
        if target.n_max() >= self.cutoff.n_max() {
            let mut amplitudes = Array1::zeros(target.dim());
            amplitudes
                .slice_mut(ndarray::s![..self.dim()])
                .assign(&self.amplitudes);
            return Ok(Self { amplitudes, cutoff: target });
        }
        let lost: f64 = (target.n_max() + 1..=self.cutoff.n_max())
            .map(|n| self.boson_occupation(n))
            .sum();
        if lost > target.tail_tol() {
            return Err(FslError::InvalidConfig(format!(
                "embedding onto n_max = {} would drop probability {lost:.3e}",
                target.n_max()
            )));
        }
        let amplitudes = self.amplitudes.slice(ndarray::s![..target.dim()]).to_owned();
        Ok(Self { amplitudes, cutoff: target })
    }

    /// L2 distance `|| self - other ||`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "distance dimension mismatch");
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self + scale * other`.
    pub fn axpy(&mut self, scale: C64, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        self.amplitudes
            .iter_mut()
            .zip(other.amplitudes.iter())
            .for_each(|(a, b)| *a += scale * b);
    }

    pub fn scale(&mut self, factor: C64) {
        self.amplitudes.iter_mut().for_each(|a| *a *= factor);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cutoff() -> FockCutoff {
        FockCutoff::new(8, 1e-10).unwrap()
    }

    #[test]
    fn index_layout_is_interleaved() {
        assert_eq!(basis_index(0, Spin::Up), 0);
        assert_eq!(basis_index(0, Spin::Down), 1);
        assert_eq!(basis_index(3, Spin::Up), 6);
        assert_eq!(basis_index(3, Spin::Down), 7);
    }

    #[test]
    fn basis_states_are_normalized() {
        let s = SpinBosonState::basis_state(5, Spin::Down, cutoff()).unwrap();
        assert!(s.is_normalized());
        assert_eq!(s.amp(5, Spin::Down), C64::new(1.0, 0.0));
        assert_eq!(s.amp(5, Spin::Up), C64::new(0.0, 0.0));
        assert_eq!(s.max_occupied(), 5);
        assert!(SpinBosonState::basis_state(9, Spin::Up, cutoff()).is_err());
    }

    #[test]
    fn embedding_roundtrip() {
        let small = cutoff();
        let big = FockCutoff::new(16, 1e-10).unwrap();
        let s = SpinBosonState::basis_state(4, Spin::Up, small).unwrap();
        let e = s.embedded(big).unwrap();
        assert_eq!(e.dim(), big.dim());
        assert_eq!(e.amp(4, Spin::Up), C64::new(1.0, 0.0));
        let back = e.embedded(small).unwrap();
        assert_eq!(back, s);
        // refusing to drop occupied levels
        let high = SpinBosonState::basis_state(12, Spin::Up, big).unwrap();
        assert!(high.embedded(small).is_err());
    }
}
