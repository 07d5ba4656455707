use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::qubit::SingleQubitOperator;
use crate::scalar::{frac_1_sqrt_2, real, Real};

/// Spatial port of a particle. Declaration order is the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Port {
    /// Beam-splitter input `a`.
    InputA,
    /// Beam-splitter input `b`.
    InputB,
    /// Beam-splitter output `A`.
    OutputA,
    /// Beam-splitter output `B`.
    OutputB,
    /// Control particle `c`, never sent through the splitter.
    Control,
}

impl Port {
    pub const ALL: [Port; 5] = [Port::InputA, Port::InputB, Port::OutputA, Port::OutputB, Port::Control];

    pub fn symbol(self) -> &'static str {
        match self {
            Port::InputA => "a",
            Port::InputB => "b",
            Port::OutputA => "A",
            Port::OutputB => "B",
            Port::Control => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn symbol(self) -> &'static str {
        match self {
            Spin::Up => "↑",
            Spin::Down => "↓",
        }
    }

    fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    fn from_index(i: usize) -> Self {
        if i == 0 {
            Spin::Up
        } else {
            Spin::Down
        }
    }
}

/// A single-particle mode: port major, spin minor in the derived order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub port: Port,
    pub spin: Spin,
}

impl Mode {
    /// Size of the mode alphabet.
    pub const COUNT: usize = 10;

    pub const fn new(port: Port, spin: Spin) -> Self {
        Self { port, spin }
    }

    /// Position in the canonical order, `0..Mode::COUNT`.
    pub fn index(self) -> usize {
        Port::ALL.iter().position(|p| *p == self.port).expect("known port") * 2 + self.spin.index()
    }

    pub fn from_index(i: usize) -> Self {
        Self { port: Port::ALL[i / 2], spin: Spin::from_index(i % 2) }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}†{}", self.port.symbol(), self.spin.symbol())
    }
}

/// Exchange statistics of the particles sent through the splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
    Distinguishable,
}

impl Statistics {
    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::Distinguishable => "distinguishable",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "boson" | "bosons" => Ok(Statistics::Boson),
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            "distinguishable" => Ok(Statistics::Distinguishable),
            other => Err(Error::Config(format!("unknown statistics `{other}`"))),
        }
    }
}

/// Image of an input creation operator under the 50:50 splitter, or `None`
/// for modes the splitter does not touch.
///
/// `a†_σ ↦ (A†_σ − iB†_σ)/√2` and `b†_σ ↦ (−iA†_σ + B†_σ)/√2`: the inverse
/// of the output-mode map `A = (a + ib)/√2`, `B = (ia + b)/√2`, which is what
/// a state written in input creation operators must be substituted with.
pub fn beam_splitter_image<T: Real>(mode: Mode) -> Option<Vec<(Mode, Complex<T>)>> {
    let h = frac_1_sqrt_2::<T>();
    let out_a = Mode::new(Port::OutputA, mode.spin);
    let out_b = Mode::new(Port::OutputB, mode.spin);
    match mode.port {
        Port::InputA => Some(vec![(out_a, real(h)), (out_b, Complex::new(T::zero(), -h))]),
        Port::InputB => Some(vec![(out_a, Complex::new(T::zero(), -h)), (out_b, real(h))]),
        _ => None,
    }
}

/// Image of a control creation operator when the control spin is rotated by
/// `e^{−iσ_y angle/2}` before a σ_z readout: `c†_t ↦ Σ_s R_{st} c†_s`.
pub fn control_rotation_image<T: Real>(mode: Mode, angle: T) -> Option<Vec<(Mode, Complex<T>)>> {
    if mode.port != Port::Control {
        return None;
    }
    let r = SingleQubitOperator::rotation_y(angle);
    let t = mode.spin.index();
    Some(
        [Spin::Up, Spin::Down]
            .into_iter()
            .map(|s| (Mode::new(Port::Control, s), r.get(s.index(), t)))
            .collect(),
    )
}
