//! Numerical test of local-unitary equivalence between pure states.

use num_complex::Complex;

use super::operator::SingleQubitOperator;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// `|⟨target| U₀ ⊗ U₁ ⊗ … |state⟩|` for the given local unitaries.
pub fn local_unitary_overlap<T: Real>(
    state: &StateVector<T>,
    target: &StateVector<T>,
    unitaries: &[SingleQubitOperator<T>],
) -> Result<T> {
    if unitaries.len() != state.num_qubits() {
        return Err(Error::Arity { factors: unitaries.len(), num_qubits: state.num_qubits() });
    }
    let mut image = state.clone();
    for (q, u) in unitaries.iter().enumerate() {
        image = image.apply_single_qubit(q, u)?;
    }
    Ok(target.inner(&image)?.norm())
}

/// Maximizes the local-unitary overlap by alternating exact single-qubit updates.
///
/// Each update holds all but one factor fixed; the overlap is then `tr(U K)`
/// for a 2×2 matrix `K`, maximized in modulus by the adjoint of the unitary
/// polar factor of `K`. Several deterministic starting points are tried and
/// the best overlap is returned with the maximizing unitaries.
pub fn max_local_unitary_overlap<T: Real>(
    state: &StateVector<T>,
    target: &StateVector<T>,
    restarts: usize,
    sweeps: usize,
) -> Result<(T, Vec<SingleQubitOperator<T>>)> {
    let n = state.num_qubits();
    if target.num_qubits() != n {
        return Err(Error::Dimension { len: target.dim(), num_qubits: n });
    }
    let mut best = (T::neg_infinity(), Vec::new());
    for r in 0..restarts.max(1) {
        let mut us: Vec<SingleQubitOperator<T>> = (0..n)
            .map(|j| {
                if r == 0 {
                    SingleQubitOperator::identity()
                } else {
                    let a = T::lit(0.7 * (r + j + 1) as f64);
                    let b = T::lit(1.3 * (r * (j + 2) + 1) as f64);
                    SingleQubitOperator::rotation_y(a) * SingleQubitOperator::phase_z(b)
                }
            })
            .collect();
        let mut value = local_unitary_overlap(state, target, &us)?;
        for _ in 0..sweeps {
            for k in 0..n {
                let mut partial = state.clone();
                for (j, u) in us.iter().enumerate() {
                    if j != k {
                        partial = partial.apply_single_qubit(j, u)?;
                    }
                }
                let kmat = contraction(&partial, target, k);
                us[k] = polar_unitary(&kmat).dagger();
            }
            let next = local_unitary_overlap(state, target, &us)?;
            let done = (next - value).abs() <= T::epsilon();
            value = next;
            if done {
                break;
            }
        }
        if value > best.0 {
            best = (value, us);
        }
    }
    Ok(best)
}

/// `K[t][s] = Σ_rest conj(target[rest, s]) · psi[rest, t]` with qubit `k` split out.
fn contraction<T: Real>(psi: &StateVector<T>, target: &StateVector<T>, k: usize) -> SingleQubitOperator<T> {
    let n = psi.num_qubits();
    let mask = 1usize << (n - 1 - k);
    let mut m = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for i in 0..psi.dim() {
        if i & mask != 0 {
            continue;
        }
        for (t, row) in m.iter_mut().enumerate() {
            let p = psi.amplitude(if t == 0 { i } else { i | mask });
            for (s, e) in row.iter_mut().enumerate() {
                let g = target.amplitude(if s == 0 { i } else { i | mask });
                *e += g.conj() * p;
            }
        }
    }
    SingleQubitOperator::new(m)
}

/// Unitary factor `W` of the polar decomposition `M = W P` of a 2×2 matrix.
///
/// Uses `M + e^{iθ} adj(M)† = tr(P) W`, where `det M = |det M| e^{iθ}`;
/// the identity holds for singular `M` with any phase.
fn polar_unitary<T: Real>(m: &SingleQubitOperator<T>) -> SingleQubitOperator<T> {
    let e = m.entries();
    let det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
    let phase = if det.norm() > T::zero() { det / det.norm() } else { real(T::one()) };
    let adj = SingleQubitOperator::new([[e[1][1], -e[0][1]], [-e[1][0], e[0][0]]]);
    let x = *m + adj.dagger().scale(phase);
    let xe = x.entries();
    let norm = (xe[0][0] * xe[1][1] - xe[0][1] * xe[1][0]).norm().sqrt();
    if norm <= T::min_positive_value() {
        return SingleQubitOperator::identity();
    }
    x.scale(real(T::one() / norm))
}
