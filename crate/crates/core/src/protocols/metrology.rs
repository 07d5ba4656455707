//! Delayed-choice GHZ phase estimation.
//!
//! Register: interferometer qubits `0..n`, control qubit `n`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::table::Condition;
use crate::error::{Error, Result};
use crate::qubit::{ghz_state, SingleQubitOperator, StateVector};
use crate::scalar::{real, Real};

pub const MAX_PARTICLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetrologySetup<T> {
    /// Interferometer particle count.
    pub n: usize,
    /// Collective phase.
    pub theta: T,
    /// GHZ phase.
    pub phi: T,
    /// Control rotation angle; `π/2` erases which-way information, `0` keeps it.
    pub control_angle: T,
}

impl<T: Real> MetrologySetup<T> {
    pub fn new(n: usize, theta: T, phi: T, control_angle: T) -> Result<Self> {
        if !(1..=MAX_PARTICLES).contains(&n) {
            return Err(Error::Capacity { requested: n, max: MAX_PARTICLES });
        }
        if ![theta, phi, control_angle].iter().all(|a| a.is_finite()) {
            return Err(Error::Argument("metrology angles must be finite".into()));
        }
        Ok(Self { n, theta, phi, control_angle })
    }

    /// Eraser-basis setup (`control_angle = π/2`).
    pub fn eraser(n: usize, theta: T, phi: T) -> Result<Self> {
        Self::new(n, theta, phi, T::FRAC_PI_2())
    }

    pub fn with_theta(&self, theta: T) -> Self {
        Self { theta, ..*self }
    }
}

/// GHZ_φ on `n + 1` qubits after the phase shift on the interferometer
/// qubits and the control rotation, just before the readouts.
pub fn prepared_state<T: Real>(setup: &MetrologySetup<T>) -> Result<StateVector<T>> {
    let mut s = ghz_state(setup.n + 1, setup.phi)?;
    let shift = SingleQubitOperator::phase_z(setup.theta);
    for q in 0..setup.n {
        s = s.apply_single_qubit(q, &shift)?;
    }
    s.apply_single_qubit(setup.n, &SingleQubitOperator::rotation_y(setup.control_angle))
}

/// Per-particle parity factor `e^{−iσ_yπ/4} σ_z e^{iσ_yπ/4}`: the interferometer's
/// closing π/2 rotation followed by a σ_z readout.
pub fn parity_factor<T: Real>() -> SingleQubitOperator<T> {
    let r = SingleQubitOperator::rotation_y(T::FRAC_PI_2());
    r * SingleQubitOperator::pauli_z() * r.dagger()
}

/// `P|ψ⟩` with `P` acting on qubits `0..n`.
fn apply_parity<T: Real>(state: &StateVector<T>, n: usize) -> StateVector<T> {
    let f = parity_factor();
    (0..n).fold(state.clone(), |s, q| s.apply_matrix(q, &f))
}

fn parity_observable<T: Real>(n: usize) -> Vec<SingleQubitOperator<T>> {
    let mut ops = vec![parity_factor(); n];
    ops.push(SingleQubitOperator::identity());
    ops
}

/// Prepared state restricted to the control record `condition` and renormalized.
pub fn branch_state<T: Real>(setup: &MetrologySetup<T>, condition: Condition) -> Result<(T, StateVector<T>)> {
    let state = prepared_state(setup)?;
    match condition.outcome() {
        None => Ok((T::one(), state)),
        Some(o) => state
            .project_qubit(setup.n, &SingleQubitOperator::pauli_z(), o)?
            .ok_or_else(|| Error::Domain("control outcome has zero probability".into())),
    }
}

/// Conditional parity expectation from the state-vector pipeline.
pub fn parity_expectation<T: Real>(setup: &MetrologySetup<T>, condition: Condition) -> Result<T> {
    branch_state(setup, condition)?.1.expectation(&parity_observable(setup.n))
}

/// `⟨∏ σ_x⟩ = ⟨(−1)^{n/2 − J_x}⟩`, evaluated by rotating every interferometer
/// qubit with a Hadamard and weighting basis states by `(−1)^{#↓}`.
pub fn parity_direct<T: Real>(setup: &MetrologySetup<T>, condition: Condition) -> Result<T> {
    let (_, state) = branch_state(setup, condition)?;
    let h = SingleQubitOperator::hadamard();
    let rotated = (0..setup.n).fold(state, |s, q| s.apply_matrix(q, &h));
    let shift = rotated.num_qubits() - setup.n;
    Ok(rotated
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let downs = (i >> shift).count_ones();
            if downs.is_multiple_of(2) { a.norm_sqr() } else { -a.norm_sqr() }
        })
        .fold(T::zero(), |acc, x| acc + x))
}

/// `⟨P²⟩` on the selected branch.
pub fn parity_square_expectation<T: Real>(setup: &MetrologySetup<T>, condition: Condition) -> Result<T> {
    let (_, state) = branch_state(setup, condition)?;
    let pp = apply_parity(&apply_parity(&state, setup.n), setup.n);
    Ok(state.inner(&pp)?.re)
}

/// Joint readout distribution `P(parity, control)` as
/// `[[P(+,+), P(+,−)], [P(−,+), P(−,−)]]` (parity major, control minor).
pub fn parity_joint<T: Real>(setup: &MetrologySetup<T>) -> Result<[[T; 2]; 2]> {
    let mut out = [[T::zero(); 2]; 2];
    for (col, condition) in [Condition::Up, Condition::Down].into_iter().enumerate() {
        let weight = prepared_state(setup)?.outcome_probability(
            setup.n,
            &SingleQubitOperator::pauli_z(),
            condition.outcome().expect("conditioned"),
        )?;
        let mean = if weight < T::BRANCH_TOL { T::zero() } else { parity_expectation(setup, condition)? };
        out[0][col] = weight * (T::one() + mean) * T::half();
        out[1][col] = weight * (T::one() - mean) * T::half();
    }
    Ok(out)
}

/// Parity expectation of a bare `n`-particle GHZ_φ after the phase shift,
/// as prepared by a classical agent who knows `phi`.
pub fn parity_on_ghz<T: Real>(n: usize, theta: T, phi: T) -> Result<T> {
    let shift = SingleQubitOperator::phase_z(theta);
    let mut s = ghz_state(n, phi)?;
    for q in 0..n {
        s = s.apply_single_qubit(q, &shift)?;
    }
    s.expectation(&vec![parity_factor(); n])
}

/// Method-of-moments phase variance, or a tag when the fringe is stationary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sensitivity<T> {
    Finite(T),
    Divergent { slope: T },
}

impl<T: Real> Sensitivity<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Sensitivity::Finite(v) => Some(v),
            Sensitivity::Divergent { .. } => None,
        }
    }
}

const STATIONARY_SLOPE: f64 = 1e-9;

/// `Var(P)/(∂⟨P⟩/∂θ)²` on the control +1 branch in the eraser basis.
///
/// The slope is `−2 Im⟨ψ|G P|ψ⟩` with the phase generator `G = Σ σ_z/2`,
/// and is cross-checked against a central finite difference.
pub fn phase_sensitivity<T: Real>(setup: &MetrologySetup<T>) -> Result<Sensitivity<T>> {
    if (setup.control_angle - T::FRAC_PI_2()).abs() > T::lit(1e-6) {
        return Err(Error::Argument("phase sensitivity requires the eraser basis (control angle π/2)".into()));
    }
    let (_, state) = branch_state(setup, Condition::Up)?;
    let p_state = apply_parity(&state, setup.n);
    let mean = state.inner(&p_state)?.re;
    let centered: Vec<Complex<T>> =
        p_state.amplitudes().iter().zip(state.amplitudes()).map(|(p, s)| p - s * mean).collect();
    let variance = centered.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());

    let shift = state.num_qubits() - setup.n;
    let g_state: Vec<Complex<T>> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let downs = T::from_u32((i >> shift).count_ones()).unwrap();
            a * real(T::half() * (T::from_usize(setup.n).unwrap() - downs - downs))
        })
        .collect();
    let z = g_state.iter().zip(p_state.amplitudes()).fold(Complex::new(T::zero(), T::zero()), |acc, (g, p)| acc + g.conj() * p);
    let slope = -T::two() * z.im;

    if slope.abs() < T::lit(STATIONARY_SLOPE) {
        return Ok(Sensitivity::Divergent { slope });
    }
    let h = T::FD_STEP;
    let plus = parity_expectation(&setup.with_theta(setup.theta + h), Condition::Up)?;
    let minus = parity_expectation(&setup.with_theta(setup.theta - h), Condition::Up)?;
    let fd = (plus - minus) / (T::two() * h);
    if (fd - slope).abs() > T::FD_REL_TOL * slope.abs().max(T::one()) {
        return Err(Error::SlopeMismatch {
            analytic: slope.to_f64().unwrap_or(f64::NAN),
            finite_difference: fd.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Sensitivity::Finite(variance / (slope * slope)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::closed_form::parity_fringe;
    use std::f64::consts::PI;

    type Setup = MetrologySetup<f64>;

    #[test]
    fn labelled_example_n2() {
        let s = Setup::eraser(2, 0.0, 0.0).unwrap();
        assert!((parity_expectation(&s, Condition::Up).unwrap() - 1.0).abs() < 1e-12);
        assert!((parity_expectation(&s, Condition::Down).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn fringes_and_unconditioned_average() {
        for n in 1..=6 {
            for k in 0..8 {
                let theta = -PI + k as f64 * 0.77;
                let s = Setup::eraser(n, theta, 0.4).unwrap();
                let want = parity_fringe(n, theta, 0.4);
                assert!((parity_expectation(&s, Condition::Up).unwrap() - want).abs() < 1e-10);
                assert!((parity_expectation(&s, Condition::Down).unwrap() + want).abs() < 1e-10);
                assert!(parity_expectation(&s, Condition::Unconditioned).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sandwich_and_direct_forms_differ_by_sign_power() {
        for n in 1..=5 {
            let s = Setup::eraser(n, 0.37, 1.1).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let a = parity_expectation(&s, Condition::Up).unwrap();
            let b = parity_direct(&s, Condition::Up).unwrap();
            assert!((a - sign * b).abs() < 1e-12);
        }
    }

    #[test]
    fn which_way_basis_kills_fringe() {
        let s = Setup::new(4, 0.3, 0.0, 0.0).unwrap();
        for c in [Condition::Up, Condition::Down] {
            assert!(parity_expectation(&s, c).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn parity_squares_to_one() {
        let s = Setup::eraser(3, 0.2, 0.1).unwrap();
        assert!((parity_square_expectation(&s, Condition::Up).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_distribution_marginals() {
        let s = Setup::eraser(3, 0.2, 0.1).unwrap();
        let j = parity_joint(&s).unwrap();
        let total: f64 = j.iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((j[0][0] + j[1][0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sensitivity_at_heisenberg_limit() {
        let s = Setup::eraser(10, PI / 20.0, 0.0).unwrap();
        assert!((phase_sensitivity(&s).unwrap().finite().unwrap() - 0.01).abs() < 1e-10);
        let one = Setup::eraser(1, 0.8, 0.0).unwrap();
        assert!((phase_sensitivity(&one).unwrap().finite().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stationary_point_is_tagged() {
        let s = Setup::eraser(3, 0.0, 0.0).unwrap();
        assert!(matches!(phase_sensitivity(&s).unwrap(), Sensitivity::Divergent { .. }));
        let which_way = Setup::new(3, 0.2, 0.0, 0.0).unwrap();
        assert!(phase_sensitivity(&which_way).is_err());
    }

    #[test]
    fn classical_agent_parity() {
        let n = 3;
        let v: f64 = parity_on_ghz(n, 0.5, 0.2).unwrap();
        assert!((v - parity_fringe(n, 0.5, 0.2)).abs() < 1e-12);
    }
}
