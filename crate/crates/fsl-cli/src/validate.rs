//! Runtime invariant suite: a condensed version of the numerical checks the
//! test suite enforces, runnable from the installed binary. Prints one line
//! per check and fails the process unless everything passes.

use num_complex::Complex64 as C64;

use fsl_core::dynamics::{
    dissipative_equivalence, evolve_analytic, evolve_oracle, expand_initial_state,
    renormalize_fock,
};
use fsl_core::fock::{
    build_displacement_expm, build_hamiltonian, build_ladder_ops, certified_band,
    displacement_boson_matrix, HamiltonianKind,
};
use fsl_core::nonhermitian::{
    analytic_nh_spectrum, eigenstate_entropy, mat2_max_abs_diff, mat2_mul, pt_symmetry_residual,
    subspace_block, Branch, DEFAULT_EP_TOL,
};
use fsl_core::spectra::{
    analytic_hermitian_spectrum, chiral_symmetry_residual, isotropic_ssh_spectrum,
    trusted_hermitian_eigenvalues, EdgeSide,
};
use fsl_core::{FockCutoff, ModelParams, Spin, SpinBosonState};

struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value < self.tolerance
    }
}

fn params(gamma: f64) -> ModelParams {
    ModelParams::new(1.0, 0.2, gamma).unwrap()
}

/// Run every check; returns true iff all pass.
pub fn run() -> Result<bool, fsl_core::FslError> {
    let mut checks: Vec<Check> = Vec::new();

    // ladder algebra: truncated commutator is the identity with a -n_max corner
    {
        let c = FockCutoff::new(5, 1e-10)?;
        let (a, adag) = build_ladder_ops(&c)?;
        let comm = a.matmul(&adag).entries() - adag.matmul(&a).entries();
        let mut worst = 0.0f64;
        for ((i, j), v) in comm.indexed_iter() {
            let expect = if i != j {
                0.0
            } else if i / 2 == 5 {
                -5.0
            } else {
                1.0
            };
            worst = worst.max((v - C64::new(expect, 0.0)).norm());
        }
        checks.push(Check {
            name: "ladder truncated commutator",
            value: worst,
            tolerance: 1e-13,
        });
    }

    // displacement: closed form vs matrix exponential on the certified band
    {
        let c = FockCutoff::new(128, 1e-10)?;
        let lag = displacement_boson_matrix(-5.0, &c);
        let exp = build_displacement_expm(-5.0, &c)?;
        let band = certified_band(-5.0, &c).unwrap_or(0);
        let mut worst = 0.0f64;
        for m in 0..=band {
            for n in 0..=band {
                worst = worst
                    .max((exp.entries()[[2 * m, 2 * n]] - C64::new(lag[[m, n]], 0.0)).norm());
            }
        }
        checks.push(Check {
            name: "displacement two-path agreement",
            value: worst,
            tolerance: 1e-8,
        });

        let unit_dev = (0..=band)
            .map(|col| {
                let norm: f64 = lag.column(col).iter().map(|v| v * v).sum::<f64>().sqrt();
                (norm - 1.0).abs()
            })
            .fold(0.0f64, f64::max);
        checks.push(Check {
            name: "displacement unitarity on certified band",
            value: unit_dev,
            tolerance: c.tail_tol(),
        });
    }

    // chiral symmetry: exact for the Hermitian chain, 2 gamma for gain/loss
    {
        let c = FockCutoff::new(64, 1e-10)?;
        let herm = build_hamiltonian(&params(0.15), &c, HamiltonianKind::Hermitian);
        checks.push(Check {
            name: "chiral residual (hermitian)",
            value: chiral_symmetry_residual(&herm),
            tolerance: 1e-15,
        });
        let nh = build_hamiltonian(&params(0.15), &c, HamiltonianKind::BalancedGainLoss);
        checks.push(Check {
            name: "chiral residual (gain/loss) vs 2 gamma",
            value: (chiral_symmetry_residual(&nh) - 0.3).abs(),
            tolerance: 1e-14,
        });
    }

    // analytic Hermitian eigensystem against the dense matrix
    {
        let p = params(0.0);
        let c = FockCutoff::new(256, 1e-10)?;
        let h = build_hamiltonian(&p, &c, HamiltonianKind::Hermitian);
        let sys = analytic_hermitian_spectrum(&p, 21, &c)?;
        let mut worst = 0.0f64;
        for pair in &sys.pairs {
            for (state, e) in [(&pair.plus, pair.energy), (&pair.minus, -pair.energy)] {
                let mut r = h.apply(state);
                r.axpy(C64::new(-e, 0.0), state);
                worst = worst.max(r.norm());
            }
        }
        checks.push(Check {
            name: "hermitian eigen-residuals (n <= 20)",
            value: worst,
            tolerance: 1e-8,
        });

        let dense = trusted_hermitian_eigenvalues(&h, c.n_active())?;
        let mut lowest: Vec<f64> = dense;
        lowest.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        let mut analytic = vec![0.0f64];
        for n in 0..50 {
            analytic.push(p.intercell(n));
            analytic.push(-p.intercell(n));
        }
        analytic.sort_by(f64::total_cmp);
        let mut lowest = lowest[..101].to_vec();
        lowest.sort_by(f64::total_cmp);
        let diff = lowest
            .iter()
            .zip(&analytic)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        checks.push(Check {
            name: "dense spectrum matches analytic ladder",
            value: diff,
            tolerance: 1e-7,
        });
    }

    // biorthogonal eigensystem residuals and Gram identity
    {
        let c = FockCutoff::new(256, 1e-10)?;
        let mut worst_res = 0.0f64;
        let mut worst_gram = 0.0f64;
        for gamma in [0.15, 0.5] {
            let p = params(gamma);
            let h = build_hamiltonian(&p, &c, HamiltonianKind::BalancedGainLoss);
            let hdag = h.dagger();
            let sys = analytic_nh_spectrum(&p, 20, &c, DEFAULT_EP_TOL)?;
            for m in &sys.modes {
                let mut r = h.apply(&m.right);
                r.axpy(-m.eigenvalue, &m.right);
                worst_res = worst_res.max(r.norm());
                let mut l = hdag.apply(&m.left);
                l.axpy(-m.eigenvalue.conj(), &m.left);
                worst_res = worst_res.max(l.norm());
            }
            let all: Vec<(&SpinBosonState, &SpinBosonState)> =
                std::iter::once((&sys.bound.left, &sys.bound.right))
                    .chain(sys.modes.iter().map(|m| (&m.left, &m.right)))
                    .collect();
            for (i, (li, _)) in all.iter().enumerate() {
                for (j, (_, rj)) in all.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst_gram = worst_gram.max((li.inner(rj) - C64::new(want, 0.0)).norm());
                }
            }
        }
        checks.push(Check {
            name: "biorthogonal eigen-residuals",
            value: worst_res,
            tolerance: 1e-8,
        });
        checks.push(Check {
            name: "biorthonormal Gram identity",
            value: worst_gram,
            tolerance: 1e-9,
        });
    }

    // completeness through expansion + reconstruction, including the EP variant
    {
        let mut worst = 0.0f64;
        for gamma in [0.15, 0.4] {
            let p = params(gamma);
            let c = FockCutoff::for_model(&p, 20);
            let sys = analytic_nh_spectrum(&p, c.n_active(), &c, DEFAULT_EP_TOL)?;
            // a deterministic dense low-band probe state
            let mut amps = ndarray::Array1::<C64>::zeros(c.dim());
            for n in 0..=20usize {
                for (k, spin) in [Spin::Up, Spin::Down].into_iter().enumerate() {
                    let phase = (0.37 * (2 * n + k) as f64).sin();
                    amps[fsl_core::fock::basis_index(n, spin)] =
                        C64::new(phase, (0.11 * (n + k) as f64).cos());
                }
            }
            let v = SpinBosonState::from_amplitudes(amps, c)?.normalized()?;
            let coeffs = expand_initial_state(&v, &sys)?;
            worst = worst.max(coeffs.reconstruct(&sys).distance(&v));
        }
        checks.push(Check {
            name: "biorthogonal completeness (incl. EP variant)",
            value: worst,
            tolerance: 1e-8,
        });
    }

    // PT symmetry of the block family
    {
        checks.push(Check {
            name: "PT residual (balanced)",
            value: pt_symmetry_residual(&params(0.5), 30, false),
            tolerance: 1e-14,
        });
        checks.push(Check {
            name: "PT residual (dissipative) vs 2 gamma",
            value: (pt_symmetry_residual(&params(0.5), 30, true) - 1.0).abs(),
            tolerance: 1e-14,
        });
    }

    // Jordan triple reproduces the EP block
    {
        let b = subspace_block(&params(0.4), 3, DEFAULT_EP_TOL);
        let j = b.jordan.as_ref().expect("n = 3 is the EP block");
        let rebuilt = mat2_mul(&j.p, &mat2_mul(&j.j, &j.p_inv));
        checks.push(Check {
            name: "EP Jordan decomposition",
            value: mat2_max_abs_diff(&rebuilt, &b.h),
            tolerance: 1e-15,
        });
    }

    // analytic propagation against the dense oracle
    {
        let p = params(0.5);
        let c = FockCutoff::for_model(&p, 10);
        let psi0 = SpinBosonState::basis_state(10, Spin::Down, c)?;
        let sys = analytic_nh_spectrum(&p, c.n_active(), &c, DEFAULT_EP_TOL)?;
        let coeffs = expand_initial_state(&psi0, &sys)?;
        let times: Vec<f64> = (1..=30).map(|k| k as f64).collect();
        let ana = evolve_analytic(&coeffs, &sys, &times)?;
        let h = build_hamiltonian(&p, &c, HamiltonianKind::BalancedGainLoss);
        let ora = evolve_oracle(&psi0, &h, &times)?;
        let mut worst = 0.0f64;
        for ((_, a), (_, o)) in ana.iter().zip(ora.iter()) {
            worst = worst.max(renormalize_fock(a)?.distance(&renormalize_fock(o)?));
        }
        checks.push(Check {
            name: "analytic vs oracle propagation",
            value: worst,
            tolerance: 1e-6,
        });
    }

    // gain/loss vs purely dissipative evolution
    {
        let p = params(0.15);
        let c = FockCutoff::for_model(&p, 10);
        let psi0 = SpinBosonState::basis_state(10, Spin::Down, c)?;
        let times: Vec<f64> = (1..=20).map(|k| k as f64).collect();
        let rep = dissipative_equivalence(&psi0, &p, &times)?;
        checks.push(Check {
            name: "dissipative equivalence (states)",
            value: rep.max_state_distance,
            tolerance: 1e-8,
        });
        checks.push(Check {
            name: "dissipative equivalence (norm factor)",
            value: rep.max_log_norm_mismatch,
            tolerance: 1e-8,
        });
    }

    // eigenstate entropy plateau
    {
        let c = FockCutoff::new(128, 1e-10)?;
        let s = eigenstate_entropy(&params(0.1), 0, Branch::Plus, &c)?;
        checks.push(Check {
            name: "eigenstate entropy plateau S/ln2 = 1",
            value: (s / std::f64::consts::LN_2 - 1.0).abs(),
            tolerance: 1e-10,
        });
    }

    // isotropic reference chain
    {
        let s = isotropic_ssh_spectrum(0.25, 1.0, 50)?;
        let zero_count = s.eigenvalues.iter().filter(|e| e.abs() < 1e-6).count();
        let sides_ok = s.edge_states.iter().any(|e| e.side == EdgeSide::Left)
            && s.edge_states.iter().any(|e| e.side == EdgeSide::Right);
        checks.push(Check {
            name: "isotropic chain edge modes",
            value: if zero_count == 2 && sides_ok { 0.0 } else { 1.0 },
            tolerance: 0.5,
        });
    }

    let mut all_passed = true;
    println!("{:-<78}", "");
    println!("{:<48} {:>12} {:>10} {:>5}", "check", "value", "tol", "");
    println!("{:-<78}", "");
    for check in &checks {
        let ok = check.passed();
        all_passed &= ok;
        println!(
            "{:<48} {:>12.3e} {:>10.0e} {:>5}",
            check.name,
            check.value,
            check.tolerance,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{:-<78}", "");
    println!(
        "{} of {} checks passed",
        checks.iter().filter(|c| c.passed()).count(),
        checks.len()
    );
    Ok(all_passed)
}
