//! Dense complex linear algebra: matrix exponential and symmetric
//! eigendecomposition wrappers.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, Factorize, Solve, UPLO};
use num_complex::Complex64 as C64;

use crate::error::Result;

/// Pade(13) numerator coefficients (Higham 2005, scaling-and-squaring).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `||A||_1`, the maximum column sum of moduli.
fn one_norm(a: &Array2<C64>) -> f64 {
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|v| v.norm()).sum();
        max = max.max(s);
    }
    max
}

fn eye(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

/// Matrix exponential `exp(A)` by scaling-and-squaring with a Pade(13)
/// approximant. Accurate to near machine precision for well-scaled inputs.
pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }

    // theta_13 from Higham's error analysis.
    let theta = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > theta {
        (norm / theta).log2().ceil() as i32
    } else {
        0
    };
    let a1 = a.mapv(|v| v * 2f64.powi(-s));

    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let id = eye(n);

    let b = |k: usize| C64::new(PADE13[k], 0.0);
    let w1 = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let w2 = a6.dot(&w1) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = a1.dot(&w2);
    let z1 = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = a6.dot(&z1) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    // Solve (V - U) X = (V + U) column by column through one LU factorization.
    let denom = &v - &u;
    let numer = &v + &u;
    let lu = denom.factorize()?;
    let mut x = Array2::<C64>::zeros((n, n));
    for j in 0..n {
        let col: Array1<C64> = numer.column(j).to_owned();
        let sol = lu.solve(&col)?;
        x.column_mut(j).assign(&sol);
    }

    for _ in 0..s {
        x = x.dot(&x);
    }
    Ok(x)
}

/// Eigenvalues and eigenvectors of a real symmetric matrix, ascending order.
/// Eigenvectors are the columns of the returned matrix.
pub fn eigh_real(m: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let (vals, vecs) = m.eigh(UPLO::Lower)?;
    Ok((vals.to_vec(), vecs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = Array2::<C64>::zeros((4, 4));
        let e = expm(&z).unwrap();
        for ((i, j), v) in e.indexed_iter() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn expm_diagonal() {
        let mut a = Array2::<C64>::zeros((2, 2));
        a[[0, 0]] = c(1.5, 0.0);
        a[[1, 1]] = c(-30.0, 2.0); // forces a scaling step
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - c(1.5, 0.0).exp()).norm() < 1e-14);
        assert!((e[[1, 1]] - c(-30.0, 2.0).exp()).norm() < 1e-14);
        assert!(e[[0, 1]].norm() < 1e-16);
    }

    #[test]
    fn expm_rotation_block() {
        // exp(-i theta sigma_x / 2) is a rotation with cos/sin entries.
        let theta = 1.3f64;
        let f = c(0.0, -theta / 2.0);
        let mut a = Array2::<C64>::zeros((2, 2));
        a[[0, 1]] = f;
        a[[1, 0]] = f;
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]] - c((theta / 2.0).cos(), 0.0)).norm() < 1e-14);
        assert!((e[[0, 1]] - c(0.0, -(theta / 2.0).sin())).norm() < 1e-14);
    }

    #[test]
    fn expm_antihermitian_is_unitary() {
        let n = 20;
        let h = Array2::from_shape_fn((n, n), |(i, j)| {
            c(
                ((i * 7 + j * 3) as f64 * 0.918).sin(),
                ((i as f64) - (j as f64)) * 0.21,
            )
        });
        let herm = (&h + &h.t().mapv(|v| v.conj())) / c(2.0, 0.0);
        let u = expm(&herm.mapv(|v| c(0.0, -1.0) * v)).unwrap();
        let prod = u.t().mapv(|v| v.conj()).dot(&u);
        for ((i, j), v) in prod.indexed_iter() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!(
                (v - c(want, 0.0)).norm() < 1e-12,
                "U not unitary at ({i},{j}): {v}"
            );
        }
    }

    #[test]
    fn eigh_matches_known_spectrum() {
        // 2x2 symmetric [[0, t], [t, 0]] has eigenvalues -t, t.
        let mut m = Array2::<f64>::zeros((2, 2));
        m[[0, 1]] = 0.7;
        m[[1, 0]] = 0.7;
        let (vals, _) = eigh_real(&m).unwrap();
        assert!((vals[0] + 0.7).abs() < 1e-14);
        assert!((vals[1] - 0.7).abs() < 1e-14);
    }
}
