use num_complex::Complex;

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::scalar::{real, Real};

/// Density matrix over `num_qubits` qubits, row-major `2ⁿ × 2ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    num_qubits: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(num_qubits: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if entries.len() != dim * dim {
            return Err(Error::DensityMatrix(format!("expected {} entries, got {}", dim * dim, entries.len())));
        }
        let rho = Self { num_qubits, entries };
        for r in 0..dim {
            for col in r..dim {
                if (rho.get(r, col) - rho.get(col, r).conj()).norm() > T::IDENTITY_TOL {
                    return Err(Error::DensityMatrix("not Hermitian".into()));
                }
            }
        }
        let trace = rho.trace();
        if (trace.re - T::one()).abs() > T::IDENTITY_TOL || trace.im.abs() > T::IDENTITY_TOL {
            return Err(Error::DensityMatrix(format!("trace {trace} differs from 1")));
        }
        if let Some(min) = rho.eigenvalues().first() {
            if *min < -T::EIGEN_TOL {
                return Err(Error::DensityMatrix(format!("negative eigenvalue {min}")));
            }
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &StateVector<T>) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in a {
            for col in a {
                entries.push(r * col.conj());
            }
        }
        Self { num_qubits: state.num_qubits(), entries }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let w = T::one() / T::from_usize(dim).expect("dimension fits");
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = real(w);
        }
        Self { num_qubits, entries }
    }

    /// `½(|↑↓⟩⟨↑↓| + |↓↑⟩⟨↓↑|)`, the classically correlated two-qubit mixture.
    pub fn zero_discord_mixture() -> Self {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); 16];
        entries[4 + 1] = real(T::half());
        entries[2 * 4 + 2] = real(T::half());
        Self { num_qubits: 2, entries }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim()).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.entries, self.dim())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.num_qubits != other.num_qubits {
            return T::infinity();
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_matrices() {
        let z = Complex::new(0.0, 0.0);
        let one = Complex::new(1.0, 0.0);
        // trace 2
        assert!(DensityMatrix::<f64>::new(1, vec![one, z, z, one]).is_err());
        // non-Hermitian
        assert!(DensityMatrix::<f64>::new(1, vec![Complex::new(0.5, 0.0), one, z, Complex::new(0.5, 0.0)]).is_err());
        // negative eigenvalue: diag(1.5, -0.5)
        assert!(DensityMatrix::<f64>::new(1, vec![Complex::new(1.5, 0.0), z, z, Complex::new(-0.5, 0.0)]).is_err());
    }

    #[test]
    fn mixture_is_valid_state() {
        let rho = DensityMatrix::<f64>::zero_discord_mixture();
        let checked = DensityMatrix::new(2, rho.entries().to_vec()).unwrap();
        let ev = checked.eigenvalues();
        assert!((ev[3] - 0.5).abs() < 1e-12 && (ev[2] - 0.5).abs() < 1e-12 && ev[0].abs() < 1e-12);
    }
}
