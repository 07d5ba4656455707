use std::ops::Mul;

use num_complex::Complex;

use crate::scalar::{c, cis, frac_1_sqrt_2, real, Real};

/// A 2×2 complex matrix acting on one spin-1/2 degree of freedom.
///
/// Entries are indexed `[row][column]` in the basis (|↑⟩, |↓⟩), where |↑⟩ and
/// |↓⟩ are the σ_z eigenstates with eigenvalues +1 and −1.
///
/// Orientation convention: σ_y is `[[0, i], [−i, 0]]`, so angles in the
/// x–y plane and rotations about y are measured with the orientation under
/// which `σ_θ = cos θ σ_x + sin θ σ_y` gives the conditional correlator
/// `±cos(θ_A − θ_B + φ)` and `e^{−iσ_y π/4}` maps |→⟩ to |↑⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitOperator<T> {
    entries: [[Complex<T>; 2]; 2],
}

impl<T: Real> SingleQubitOperator<T> {
    pub fn new(entries: [[Complex<T>; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[[Complex<T>; 2]; 2] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row][col]
    }

    pub fn identity() -> Self {
        Self::new([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]])
    }

    pub fn pauli_x() -> Self {
        Self::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
    }

    pub fn pauli_y() -> Self {
        Self::new([[c(0.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(0.0, 0.0)]])
    }

    pub fn pauli_z() -> Self {
        Self::new([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
    }

    pub fn hadamard() -> Self {
        let h = real(frac_1_sqrt_2::<T>());
        Self::new([[h, h], [h, -h]])
    }

    /// In-plane spin component `cos θ σ_x + sin θ σ_y`.
    pub fn sigma_theta(theta: T) -> Self {
        let (s, co) = theta.sin_cos();
        Self::pauli_x().scale(real(co)) + Self::pauli_y().scale(real(s))
    }

    /// `e^{−i σ_y angle/2}`.
    pub fn rotation_y(angle: T) -> Self {
        let half = angle * T::half();
        Self::identity().scale(real(half.cos()))
            + Self::pauli_y().scale(Complex::new(T::zero(), -half.sin()))
    }

    /// `e^{−i θ σ_z/2}`, the per-particle collective phase shift.
    pub fn phase_z(theta: T) -> Self {
        let half = theta * T::half();
        let z = Complex::new(T::zero(), T::zero());
        Self::new([[cis(-half), z], [z, cis(half)]])
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e *= k;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let e = &self.entries;
        Self::new([[e[0][0].conj(), e[1][0].conj()], [e[0][1].conj(), e[1][1].conj()]])
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for r in 0..2 {
            for col in 0..2 {
                m = m.max((self.entries[r][col] - other.entries[r][col]).norm());
            }
        }
        m
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        (self.dagger() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.dagger().max_abs_diff(self) <= tol
    }

    /// Hermitian with spectrum {+1, −1}: `O = O†`, `O² = 1` and `tr O = 0`.
    pub fn is_plus_minus_observable(&self, tol: T) -> bool {
        self.is_hermitian(tol)
            && (*self * *self).max_abs_diff(&Self::identity()) <= tol
            && (self.entries[0][0] + self.entries[1][1]).norm() <= tol
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    pub fn hermitian_eigenvalues(&self) -> [T; 2] {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = self.entries[0][1].norm();
        let mean = (a + d) * T::half();
        let radius = (((a - d) * T::half()).powi(2) + b * b).sqrt();
        [mean - radius, mean + radius]
    }

    /// Spectral projector `(1 ± O)/2` onto the ±1 eigenspace of a ±1 observable.
    pub fn projector(&self, plus: bool) -> Self {
        let sign = if plus { T::one() } else { -T::one() };
        (Self::identity() + self.scale(real(sign))).scale(real(T::half()))
    }

    #[inline]
    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let e = &self.entries;
        [e[0][0] * v[0] + e[0][1] * v[1], e[1][0] * v[0] + e[1][1] * v[1]]
    }
}

impl<T: Real> Mul for SingleQubitOperator<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, e) in row.iter_mut().enumerate() {
                *e = a[r][0] * b[0][col] + a[r][1] * b[1][col];
            }
        }
        Self::new(out)
    }
}

impl<T: Real> std::ops::Add for SingleQubitOperator<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for r in 0..2 {
            for col in 0..2 {
                out.entries[r][col] += rhs.entries[r][col];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type Op = SingleQubitOperator<f64>;

    #[test]
    fn paulis_are_hermitian_unitary_and_square_to_one() {
        for p in [Op::pauli_x(), Op::pauli_y(), Op::pauli_z()] {
            assert!(p.is_unitary(1e-12));
            assert!(p.is_plus_minus_observable(1e-12));
        }
    }

    #[test]
    fn sigma_theta_has_spectrum_plus_minus_one() {
        for k in 0..64 {
            let theta = -PI + k as f64 * 0.1;
            let s = Op::sigma_theta(theta);
            let [lo, hi] = s.hermitian_eigenvalues();
            assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
            assert!(s.is_plus_minus_observable(1e-12));
        }
    }

    #[test]
    fn rotation_twice_by_quarter_turn_is_minus_i_sigma_y() {
        let r = Op::rotation_y(PI / 2.0);
        let expected = Op::pauli_y().scale(c(0.0, -1.0));
        assert!((r * r).max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn eraser_rotation_maps_right_to_up() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let out = Op::rotation_y(PI / 2.0).apply([c(h, 0.0), c(h, 0.0)]);
        assert!((out[0].norm() - 1.0).abs() < 1e-12);
        assert!(out[1].norm() < 1e-12);
    }

    #[test]
    fn projectors_resolve_identity() {
        let o = Op::sigma_theta(0.3);
        let sum = o.projector(true) + o.projector(false);
        assert!(sum.max_abs_diff(&Op::identity()) < 1e-12);
    }

    #[test]
    fn non_unitary_detected() {
        assert!(!Op::pauli_x().scale(c(2.0, 0.0)).is_unitary(1e-12));
        assert!(!Op::hadamard().scale(c(0.0, 1.0)).is_hermitian(1e-12));
    }
}
