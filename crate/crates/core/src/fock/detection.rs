use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mode::{Mode, Port, Spin};
use super::polynomial::{occupation_weight, FockPolynomial};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which output ports fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum PortPattern {
    /// One particle in each output (coincidence, anti-bunching).
    AB,
    /// Both particles in `A` (bunching).
    AA,
    /// Both particles in `B` (bunching).
    BB,
}

impl PortPattern {
    /// Row order used by every HOM table.
    pub const ALL: [PortPattern; 3] = [PortPattern::AB, PortPattern::AA, PortPattern::BB];

    pub fn label(self) -> &'static str {
        match self {
            PortPattern::AB => "AB",
            PortPattern::AA => "AA",
            PortPattern::BB => "BB",
        }
    }

    fn from_counts(a: usize, b: usize) -> Option<Self> {
        match (a, b) {
            (1, 1) => Some(PortPattern::AB),
            (2, 0) => Some(PortPattern::AA),
            (0, 2) => Some(PortPattern::BB),
            _ => None,
        }
    }
}

impl fmt::Display for PortPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PortPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "AB" => Ok(PortPattern::AB),
            "AA" => Ok(PortPattern::AA),
            "BB" => Ok(PortPattern::BB),
            other => Err(Error::Argument(format!("unknown port pattern `{other}`"))),
        }
    }
}

/// A detection event: output ports, optionally the detected spins, and
/// optionally the control readout.
///
/// `spins` lists the spin found in `A` then `B` for coincidences, and the two
/// spins in ascending order (↑ before ↓) for bunched events. `None` sums over
/// spins; a `None` control sums over control outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DetectionPattern {
    pub ports: PortPattern,
    pub spins: Option<(Spin, Spin)>,
    pub control: Option<Spin>,
}

impl DetectionPattern {
    pub fn ports(ports: PortPattern) -> Self {
        Self { ports, spins: None, control: None }
    }

    pub fn with_control(ports: PortPattern, control: Spin) -> Self {
        Self { ports, spins: None, control: Some(control) }
    }
}

/// Classification of one canonical factor list.
#[derive(Debug, PartialEq, Eq)]
pub(crate) struct Event {
    pub ports: PortPattern,
    pub spins: (Spin, Spin),
    pub control: Option<Spin>,
}

pub(crate) fn classify(factors: &[Mode]) -> Result<Event> {
    let mut in_a = Vec::new();
    let mut in_b = Vec::new();
    let mut control = None;
    for m in factors {
        match m.port {
            Port::OutputA => in_a.push(m.spin),
            Port::OutputB => in_b.push(m.spin),
            Port::Control => {
                if control.replace(m.spin).is_some() {
                    return Err(Error::Domain("more than one control particle".into()));
                }
            }
            Port::InputA | Port::InputB => {
                return Err(Error::Domain("detection requires a post-splitter state (input port present)".into()))
            }
        }
    }
    let ports = PortPattern::from_counts(in_a.len(), in_b.len())
        .ok_or_else(|| Error::Domain("detection patterns cover exactly two particles".into()))?;
    let mut detected: Vec<Spin> = in_a.into_iter().chain(in_b).collect();
    if ports != PortPattern::AB {
        detected.sort();
    }
    Ok(Event { ports, spins: (detected[0], detected[1]), control })
}

pub(crate) fn matches(event: &Event, pattern: &DetectionPattern) -> bool {
    event.ports == pattern.ports
        && pattern.spins.is_none_or(|s| s == event.spins)
        && pattern.control.is_none_or(|c| event.control == Some(c))
}

/// Born-rule probability of `pattern` for a post-splitter state.
///
/// Distinct canonical monomials are orthogonal, so the probability is the
/// statistics-weighted squared modulus summed over matching terms, relative
/// to the state's norm.
pub fn event_probability<T: Real>(state: &FockPolynomial<T>, pattern: &DetectionPattern) -> Result<T> {
    if state.contains_port(Port::InputA) || state.contains_port(Port::InputB) {
        return Err(Error::Domain("state still contains input ports".into()));
    }
    let norm = state.norm_sqr();
    if norm <= T::zero() {
        return Err(Error::Domain("zero state".into()));
    }
    let mut total = T::zero();
    for (factors, c) in state.terms() {
        let event = classify(factors)?;
        if pattern.control.is_some() && event.control.is_none() {
            return Err(Error::Domain("pattern conditions on a control particle the state lacks".into()));
        }
        if matches(&event, pattern) {
            total += c.norm_sqr() * occupation_weight::<T>(factors, state.statistics());
        }
    }
    Ok(total / norm)
}
