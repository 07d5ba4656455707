use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::ExperimentKind;
use crate::error::{Error, Result};
use crate::fock::PortPattern;
use crate::qubit::Outcome;

/// What the A–B apparatus recorded in one shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SystemOutcome {
    /// HOM output ports.
    Ports(PortPattern),
    /// Spin readouts of A and B along their σ_θ axes.
    Spins { a: Outcome, b: Outcome },
    /// Interferometer parity.
    Parity(Outcome),
}

fn spin_code(o: Outcome) -> char {
    match o {
        Outcome::Plus => 'u',
        Outcome::Minus => 'd',
    }
}

impl fmt::Display for SystemOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemOutcome::Ports(p) => f.write_str(p.label()),
            SystemOutcome::Spins { a, b } => write!(f, "{}{}", spin_code(*a), spin_code(*b)),
            SystemOutcome::Parity(o) => write!(f, "{:+}", o.value()),
        }
    }
}

impl FromStr for SystemOutcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spin = |c| match c {
            'u' => Some(Outcome::Plus),
            'd' => Some(Outcome::Minus),
            _ => None,
        };
        match s {
            "+1" => return Ok(SystemOutcome::Parity(Outcome::Plus)),
            "-1" => return Ok(SystemOutcome::Parity(Outcome::Minus)),
            _ => {}
        }
        if let Ok(p) = s.parse::<PortPattern>() {
            return Ok(SystemOutcome::Ports(p));
        }
        let mut chars = s.chars();
        match (chars.next().and_then(spin), chars.next().and_then(spin), chars.next()) {
            (Some(a), Some(b), None) => Ok(SystemOutcome::Spins { a, b }),
            _ => Err(Error::Argument(format!("unknown outcome code `{s}`"))),
        }
    }
}

impl From<SystemOutcome> for String {
    fn from(o: SystemOutcome) -> String {
        o.to_string()
    }
}

impl TryFrom<String> for SystemOutcome {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Settings in force during one shot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ShotSettings {
    None,
    /// Setting indices (0 or 1) chosen for A and B, with their angles.
    Chsh { a: u8, b: u8, theta_a: f64, theta_b: f64 },
    /// Interferometer phase.
    Phase { theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub shot_index: u64,
    pub experiment: ExperimentKind,
    pub outcome: SystemOutcome,
    pub settings: ShotSettings,
}

/// Control-particle readout, or the classical agent's coin for mixture runs
/// (which carry no basis angle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlRecord {
    pub shot_index: u64,
    pub control_outcome: Outcome,
    pub basis_angle: Option<f64>,
}
