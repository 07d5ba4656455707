//! Conditional CHSH test on the two-particle relative states.

use serde::{Deserialize, Serialize};

use super::table::{Condition, ProbabilityTable};
use crate::error::{Error, Result};
use crate::qubit::{bell_relative_state, tripartite_spin_state, Outcome, SingleQubitOperator, Sign, StateVector};
use crate::scalar::Real;

/// Row order of every CHSH table: (A, B) outcomes ↓↓, ↓↑, ↑↓, ↑↑.
pub const CHSH_ROWS: [(Outcome, Outcome); 4] = [
    (Outcome::Minus, Outcome::Minus),
    (Outcome::Minus, Outcome::Plus),
    (Outcome::Plus, Outcome::Minus),
    (Outcome::Plus, Outcome::Plus),
];

pub const CHSH_ROW_LABELS: [&str; 4] = ["dd", "du", "ud", "uu"];

/// Two measurement angles per party, stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings<T> {
    pub theta_a0: T,
    pub theta_a1: T,
    pub theta_b0: T,
    pub theta_b1: T,
}

impl<T: Real> ChshSettings<T> {
    pub fn new(theta_a0: T, theta_a1: T, theta_b0: T, theta_b1: T) -> Result<Self> {
        let all = [theta_a0, theta_a1, theta_b0, theta_b1];
        if all.iter().any(|a| !a.is_finite()) {
            return Err(Error::Argument("CHSH angles must be finite".into()));
        }
        let wrap = |a: T| {
            let w = a % T::TAU();
            let w = if w < T::zero() { w + T::TAU() } else { w };
            if w >= T::TAU() { T::zero() } else { w }
        };
        Ok(Self { theta_a0: wrap(theta_a0), theta_a1: wrap(theta_a1), theta_b0: wrap(theta_b0), theta_b1: wrap(theta_b1) })
    }

    pub fn theta_a(&self, k: usize) -> T {
        if k == 0 { self.theta_a0 } else { self.theta_a1 }
    }

    pub fn theta_b(&self, k: usize) -> T {
        if k == 0 { self.theta_b0 } else { self.theta_b1 }
    }
}

/// Tripartite state with the control rotated for a σ_z readout.
fn prepared<T: Real>(phi: T, control_angle: T) -> StateVector<T> {
    tripartite_spin_state(phi).apply_matrix(2, &SingleQubitOperator::rotation_y(control_angle))
}

/// Joint Born probabilities `P(a, b, c)`: rows in [`CHSH_ROWS`] order,
/// columns control +1 and −1.
pub fn chsh_joint<T: Real>(theta_a: T, theta_b: T, phi: T, control_angle: T) -> [[T; 2]; 4] {
    let state = prepared(phi, control_angle);
    let sa = SingleQubitOperator::sigma_theta(theta_a);
    let sb = SingleQubitOperator::sigma_theta(theta_b);
    let sz = SingleQubitOperator::pauli_z();
    let mut out = [[T::zero(); 2]; 4];
    for (row, (a, b)) in out.iter_mut().zip(CHSH_ROWS) {
        for (slot, c) in row.iter_mut().zip([Outcome::Plus, Outcome::Minus]) {
            *slot = state
                .apply_matrix(0, &sa.projector(a == Outcome::Plus))
                .apply_matrix(1, &sb.projector(b == Outcome::Plus))
                .apply_matrix(2, &sz.projector(c == Outcome::Plus))
                .norm_sqr();
        }
    }
    out
}

/// Born probabilities `P(a, b)` in [`CHSH_ROWS`] order for the bare pair
/// `(|↑↓⟩ ± e^{iφ}|↓↑⟩)/√2`.
pub fn pair_joint<T: Real>(theta_a: T, theta_b: T, phi: T, sign: Sign) -> [T; 4] {
    let state = bell_relative_state(phi, sign);
    let sa = SingleQubitOperator::sigma_theta(theta_a);
    let sb = SingleQubitOperator::sigma_theta(theta_b);
    CHSH_ROWS.map(|(a, b)| {
        state
            .apply_matrix(0, &sa.projector(a == Outcome::Plus))
            .apply_matrix(1, &sb.projector(b == Outcome::Plus))
            .norm_sqr()
    })
}

/// Conditional outcome table for local angles `theta_a`, `theta_b`.
pub fn chsh_table<T: Real>(theta_a: T, theta_b: T, phi: T) -> Result<ProbabilityTable<T>> {
    chsh_table_in_basis(theta_a, theta_b, phi, T::zero())
}

/// As [`chsh_table`] with the control rotated by `e^{−iσ_y control_angle/2}`.
pub fn chsh_table_in_basis<T: Real>(theta_a: T, theta_b: T, phi: T, control_angle: T) -> Result<ProbabilityTable<T>> {
    let joint = chsh_joint(theta_a, theta_b, phi, control_angle);
    let entries = joint.iter().map(|[u, d]| [*u, *d, *u + *d]).collect();
    ProbabilityTable::new(CHSH_ROW_LABELS.iter().map(|s| s.to_string()).collect(), entries)
}

/// State of A and B (control left in place) relevant to `condition`.
///
/// Conditioned branches are renormalized; the unconditioned view keeps the
/// full state, whose A–B marginal is the equal mixture of both branches.
fn branch<T: Real>(phi: T, control_angle: T, condition: Condition) -> Result<StateVector<T>> {
    let state = prepared(phi, control_angle);
    match condition.outcome() {
        None => Ok(state),
        Some(o) => state
            .project_qubit(2, &SingleQubitOperator::pauli_z(), o)?
            .map(|(_, s)| s)
            .ok_or_else(|| Error::Domain("control outcome has zero probability".into())),
    }
}

/// `⟨σ_{θ_A} ⊗ σ_{θ_B}⟩` on the branch selected by `condition`.
pub fn chsh_correlator<T: Real>(theta_a: T, theta_b: T, phi: T, condition: Condition) -> Result<T> {
    correlator_on(&branch(phi, T::zero(), condition)?, theta_a, theta_b)
}

fn correlator_on<T: Real>(state: &StateVector<T>, theta_a: T, theta_b: T) -> Result<T> {
    state.expectation(&[
        SingleQubitOperator::sigma_theta(theta_a),
        SingleQubitOperator::sigma_theta(theta_b),
        SingleQubitOperator::identity(),
    ])
}

/// `|E(a0,b0) + E(a0,b1) + E(a1,b0) − E(a1,b1)|` on the selected branch.
pub fn chsh_value<T: Real>(settings: &ChshSettings<T>, phi: T, condition: Condition) -> Result<T> {
    let state = branch(phi, T::zero(), condition)?;
    let e = |i: usize, j: usize| correlator_on(&state, settings.theta_a(i), settings.theta_b(j));
    Ok((e(0, 0)? + e(0, 1)? + e(1, 0)? - e(1, 1)?).abs())
}

/// In-plane correlation tensor `T_ij = ⟨σ_i ⊗ σ_j⟩`, `i, j ∈ {x, y}`.
fn correlation_tensor<T: Real>(state: &StateVector<T>) -> Result<[[T; 2]; 2]> {
    let axes = [SingleQubitOperator::pauli_x(), SingleQubitOperator::pauli_y()];
    let mut t = [[T::zero(); 2]; 2];
    for (i, si) in axes.iter().enumerate() {
        for (j, sj) in axes.iter().enumerate() {
            t[i][j] = state.expectation(&[*si, *sj, SingleQubitOperator::identity()])?;
        }
    }
    Ok(t)
}

fn unit<T: Real>(a: T) -> [T; 2] {
    let (s, c) = a.sin_cos();
    [c, s]
}

fn bilinear<T: Real>(t: &[[T; 2]; 2], u: [T; 2], v: [T; 2]) -> T {
    u[0] * (t[0][0] * v[0] + t[0][1] * v[1]) + u[1] * (t[1][0] * v[0] + t[1][1] * v[1])
}

fn direction<T: Real>(v: [T; 2]) -> T {
    v[1].atan2(v[0])
}

fn signed_s<T: Real>(t: &[[T; 2]; 2], a: [T; 4]) -> T {
    let e = |x: T, y: T| bilinear(t, unit(x), unit(y));
    e(a[0], a[2]) + e(a[0], a[3]) + e(a[1], a[2]) - e(a[1], a[3])
}

/// Settings maximizing the conditional CHSH value.
///
/// Correlators are bilinear in the in-plane unit vectors, `E = u(θ_A)ᵀ T u(θ_B)`.
/// A grid with step `π/64` (first angle pinned at 0, which only fixes a common
/// rotation) locates the basin; alternating exact maximization of each angle
/// with the others held fixed then converges to the maximum.
pub fn optimal_chsh_angles<T: Real>(phi: T, condition: Condition) -> Result<ChshSettings<T>> {
    if condition == Condition::Unconditioned {
        return Err(Error::Argument("optimal angles need a conditioned branch".into()));
    }
    let t = correlation_tensor(&branch(phi, T::zero(), condition)?)?;
    let steps = 128;
    let grid: Vec<T> = (0..steps).map(|k| T::PI() * T::from_usize(k).unwrap() / T::lit(64.0)).collect();
    let e: Vec<T> = grid
        .iter()
        .flat_map(|&a| grid.iter().map(move |&b| (a, b)))
        .map(|(a, b)| bilinear(&t, unit(a), unit(b)))
        .collect();
    let mut best = (T::neg_infinity(), [0usize; 4]);
    for a1 in 0..steps {
        for b0 in 0..steps {
            for b1 in 0..steps {
                let s = e[b0] + e[b1] + e[a1 * steps + b0] - e[a1 * steps + b1];
                if s.abs() > best.0 {
                    best = (s.abs(), [0, a1, b0, b1]);
                }
            }
        }
    }
    let mut a = best.1.map(|k| grid[k]);
    let sign = if signed_s(&t, a) < T::zero() { -T::one() } else { T::one() };
    let st = t.map(|row| row.map(|x| x * sign));
    let tt = [[st[0][0], st[1][0]], [st[0][1], st[1][1]]];
    let apply = |m: &[[T; 2]; 2], v: [T; 2]| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
    let mut value = signed_s(&st, a);
    for _ in 0..200 {
        let (ub0, ub1) = (unit(a[2]), unit(a[3]));
        a[0] = direction(apply(&st, [ub0[0] + ub1[0], ub0[1] + ub1[1]]));
        a[1] = direction(apply(&st, [ub0[0] - ub1[0], ub0[1] - ub1[1]]));
        let (ua0, ua1) = (unit(a[0]), unit(a[1]));
        a[2] = direction(apply(&tt, [ua0[0] + ua1[0], ua0[1] + ua1[1]]));
        a[3] = direction(apply(&tt, [ua0[0] - ua1[0], ua0[1] - ua1[1]]));
        let next = signed_s(&st, a);
        let done = (next - value).abs() <= T::epsilon();
        value = next;
        if done {
            break;
        }
    }
    if sign < T::zero() {
        // Flipping both B axes negates every correlator.
        a[2] += T::PI();
        a[3] += T::PI();
    }
    ChshSettings::new(a[0], a[1], a[2], a[3])
}
