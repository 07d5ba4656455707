//! Delayed-choice Hong-Ou-Mandel interferometer.

use super::table::{Condition, ProbabilityTable};
use crate::error::Result;
use crate::fock::{
    beam_splitter_substitute, distinguishable_event_probability, event_probability, hom_input_state, hom_pair_state,
    rotate_control, DetectionPattern, LabeledState, PortPattern, Spin, Statistics,
};
use crate::qubit::Sign;
use crate::scalar::Real;

fn control_spin(condition: Condition) -> Option<Spin> {
    match condition {
        Condition::Up => Some(Spin::Up),
        Condition::Down => Some(Spin::Down),
        Condition::Unconditioned => None,
    }
}

/// Joint probability of `ports` and the control record `condition`, with the
/// control spin rotated by `e^{−iσ_y control_angle/2}` before its σ_z readout.
///
/// Bosons and fermions go through the creation-operator algebra;
/// distinguishable particles through labeled first-quantized propagation.
pub fn hom_probability<T: Real>(
    phi: T,
    statistics: Statistics,
    control_angle: T,
    ports: PortPattern,
    condition: Condition,
) -> Result<T> {
    let pattern = DetectionPattern { ports, spins: None, control: control_spin(condition) };
    match statistics {
        Statistics::Distinguishable => distinguishable_event_probability(phi, control_angle, &pattern),
        quantum => {
            let state = rotate_control(&hom_input_state(phi, quantum), control_angle);
            event_probability(&beam_splitter_substitute(&state)?, &pattern)
        }
    }
}

/// Probability of `ports` for the bare pair `(|↑↓⟩ ± e^{iφ}|↓↑⟩)/√2`, as
/// prepared by an agent who knows the sign.
pub fn hom_pair_probability<T: Real>(phi: T, sign: Sign, statistics: Statistics, ports: PortPattern) -> Result<T> {
    let pattern = DetectionPattern::ports(ports);
    match statistics {
        Statistics::Distinguishable => LabeledState::hom_pair(phi, sign).beam_splitter().event_probability(&pattern),
        quantum => event_probability(&beam_splitter_substitute(&hom_pair_state(phi, sign, quantum))?, &pattern),
    }
}

/// Detection table with the control read out in the ↑/↓ basis.
pub fn hom_table<T: Real>(phi: T, statistics: Statistics) -> Result<ProbabilityTable<T>> {
    hom_table_in_basis(phi, statistics, T::zero())
}

/// Detection table for a control basis rotated by `control_angle`
/// (`π/2` reads the control in the →/← which-way basis).
pub fn hom_table_in_basis<T: Real>(phi: T, statistics: Statistics, control_angle: T) -> Result<ProbabilityTable<T>> {
    let mut entries = Vec::with_capacity(3);
    for ports in PortPattern::ALL {
        let mut row = [T::zero(); 3];
        for (slot, condition) in row.iter_mut().zip(Condition::ALL) {
            *slot = hom_probability(phi, statistics, control_angle, ports, condition)?;
        }
        entries.push(row);
    }
    ProbabilityTable::new(PortPattern::ALL.iter().map(|p| p.label().to_string()).collect(), entries)
}
