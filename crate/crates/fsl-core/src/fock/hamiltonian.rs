//! Hamiltonian assembly on the truncated chain.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::fock::operators::{OperatorMatrix, OperatorTag};
use crate::fock::params::{FockCutoff, ModelParams};
use crate::fock::state::{basis_index, Spin};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianKind {
    /// `J1 sigma_x + J2 (a_dag sigma_- + a sigma_+)`.
    Hermitian,
    /// Hermitian part plus balanced gain and loss `-i gamma sigma_z`.
    BalancedGainLoss,
    /// Purely dissipative variant `H_NH - i gamma I`, i.e. `-2 i gamma`
    /// on every spin-up level.
    Dissipative,
}

/// Assemble the dense Hamiltonian. Couplings are placed directly so the
/// sparsity pattern is exact: `(n,up) <-> (n,down)` carries `J1` and
/// `(n,up) <-> (n+1,down)` carries `J2 sqrt(n+1)`; everything else is zero.
pub fn build_hamiltonian(
    params: &ModelParams,
    cutoff: &FockCutoff,
    kind: HamiltonianKind,
) -> OperatorMatrix {
    let dim = cutoff.dim();
    let mut h = Array2::<C64>::zeros((dim, dim));
    for n in 0..=cutoff.n_max() {
        let up = basis_index(n, Spin::Up);
        let down = basis_index(n, Spin::Down);
        h[[up, down]] = C64::new(params.j1(), 0.0);
        h[[down, up]] = C64::new(params.j1(), 0.0);
        if n < cutoff.n_max() {
            let down_next = basis_index(n + 1, Spin::Down);
            let j = C64::new(params.intercell(n), 0.0);
            h[[down_next, up]] = j;
            h[[up, down_next]] = j;
        }
    }
    let g = params.gamma();
    match kind {
        HamiltonianKind::Hermitian => {}
        HamiltonianKind::BalancedGainLoss => {
            for n in 0..=cutoff.n_max() {
                h[[basis_index(n, Spin::Up), basis_index(n, Spin::Up)]] = C64::new(0.0, -g);
                h[[basis_index(n, Spin::Down), basis_index(n, Spin::Down)]] = C64::new(0.0, g);
            }
        }
        HamiltonianKind::Dissipative => {
            for n in 0..=cutoff.n_max() {
                h[[basis_index(n, Spin::Up), basis_index(n, Spin::Up)]] = C64::new(0.0, -2.0 * g);
            }
        }
    }
    OperatorMatrix::new(h, *cutoff, OperatorTag::Hamiltonian).expect("square by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::operators::{build_ladder_ops, spin_minus, spin_plus, spin_x, spin_z};

    fn params() -> ModelParams {
        ModelParams::new(1.0, 0.2, 0.15).unwrap()
    }

    fn cutoff() -> FockCutoff {
        FockCutoff::new(24, 1e-10).unwrap()
    }

    #[test]
    fn matrix_elements() {
        let h = build_hamiltonian(&params(), &cutoff(), HamiltonianKind::Hermitian);
        let e = h.entries();
        // intracell J1 and intercell J2 sqrt(1) at n = 0
        assert_eq!(
            e[[basis_index(0, Spin::Up), basis_index(0, Spin::Down)]],
            C64::new(1.0, 0.0)
        );
        assert_eq!(
            e[[basis_index(1, Spin::Down), basis_index(0, Spin::Up)]],
            C64::new(0.2, 0.0)
        );
        assert_eq!(h.hermiticity_deviation(), 0.0);
    }

    #[test]
    fn sparsity_pattern_is_exact() {
        let c = cutoff();
        let h = build_hamiltonian(&params(), &c, HamiltonianKind::Hermitian);
        for ((i, j), v) in h.entries().indexed_iter() {
            let (ni, si) = (i / 2, i % 2);
            let (nj, sj) = (j / 2, j % 2);
            let intracell = ni == nj && si != sj;
            let intercell = (si == 0 && sj == 1 && nj == ni + 1)
                || (si == 1 && sj == 0 && ni == nj + 1);
            if !(intracell || intercell) {
                assert_eq!(*v, C64::new(0.0, 0.0), "unexpected entry at ({i},{j})");
            }
        }
    }

    #[test]
    fn agrees_with_operator_composition() {
        // J1 sigma_x + J2 (a_dag sigma_- + a sigma_+), built from the
        // primitive operators, reproduces the direct assembly exactly.
        let c = cutoff();
        let p = params();
        let (a, adag) = build_ladder_ops(&c).unwrap();
        let composed = spin_x(&c).entries().mapv(|v| v * p.j1())
            + (adag.matmul(&spin_minus(&c)).entries() + a.matmul(&spin_plus(&c)).entries())
                .mapv(|v| v * p.j2());
        let direct = build_hamiltonian(&p, &c, HamiltonianKind::Hermitian);
        let max_diff = (&composed - direct.entries())
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max);
        assert_eq!(max_diff, 0.0);
    }

    #[test]
    fn gamma_zero_collapses_kinds() {
        let p = ModelParams::new(1.0, 0.2, 0.0).unwrap();
        let c = cutoff();
        let herm = build_hamiltonian(&p, &c, HamiltonianKind::Hermitian);
        let nh = build_hamiltonian(&p, &c, HamiltonianKind::BalancedGainLoss);
        assert_eq!(herm.entries(), nh.entries());
    }

    #[test]
    fn dissipative_is_balanced_minus_i_gamma() {
        let p = params();
        let c = cutoff();
        let nh = build_hamiltonian(&p, &c, HamiltonianKind::BalancedGainLoss);
        let dis = build_hamiltonian(&p, &c, HamiltonianKind::Dissipative);
        let diff = dis.entries() - nh.entries();
        for ((i, j), v) in diff.indexed_iter() {
            let want = if i == j {
                C64::new(0.0, -p.gamma())
            } else {
                C64::new(0.0, 0.0)
            };
            assert_eq!(*v, want, "at ({i},{j})");
        }
    }

    #[test]
    fn chiral_anticommutation_is_exact() {
        let c = cutoff();
        let h = build_hamiltonian(&params(), &c, HamiltonianKind::Hermitian);
        let sz = spin_z(&c);
        let anti = sz.matmul(&h).entries() + h.matmul(&sz).entries();
        assert!(anti.iter().all(|v| *v == C64::new(0.0, 0.0)));
    }
}
