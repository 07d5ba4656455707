//! Small dense eigen-solver for Hermitian matrices.

use num_complex::Complex;

use crate::scalar::Real;

/// Eigenvalues (ascending) of a Hermitian `dim × dim` matrix stored row-major.
///
/// The matrix `X + iY` is embedded as the real symmetric `[[X, −Y], [Y, X]]`,
/// whose spectrum is that of the original with every eigenvalue doubled;
/// cyclic Jacobi sweeps diagonalize the embedding.
pub fn hermitian_eigenvalues<T: Real>(entries: &[Complex<T>], dim: usize) -> Vec<T> {
    assert_eq!(entries.len(), dim * dim);
    let n = 2 * dim;
    let mut a = vec![T::zero(); n * n];
    for r in 0..dim {
        for col in 0..dim {
            let z = entries[r * dim + col];
            a[r * n + col] = z.re;
            a[(r + dim) * n + col + dim] = z.re;
            a[r * n + col + dim] = -z.im;
            a[(r + dim) * n + col] = z.im;
        }
    }
    jacobi_symmetric(&mut a, n);
    let mut diag: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    diag.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    diag.into_iter().step_by(2).collect()
}

fn jacobi_symmetric<T: Real>(a: &mut [T], n: usize) {
    let scale = a.iter().fold(T::zero(), |m, x| m.max(x.abs())).max(T::min_positive_value());
    let threshold = T::epsilon() * scale * T::lit(1e-2);
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= threshold {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (T::two() * apq);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_y_spectrum() {
        let ev = hermitian_eigenvalues(&[z(0.0, 0.0), z(0.0, -1.0), z(0.0, 1.0), z(0.0, 0.0)], 2);
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!((ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_three_by_three() {
        // M = [[1, i, 0], [-i, 1, 0], [0, 0, 1]] has eigenvalues 0, 2, 1.
        let m = [
            z(1.0, 0.0),
            z(0.0, 1.0),
            z(0.0, 0.0),
            z(0.0, -1.0),
            z(1.0, 0.0),
            z(0.0, 0.0),
            z(0.0, 0.0),
            z(0.0, 0.0),
            z(1.0, 0.0),
        ];
        let ev = hermitian_eigenvalues(&m, 3);
        for (got, want) in ev.iter().zip([0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }
}
