//! First-quantized propagation of labeled (distinguishable) particles.
//!
//! Each particle carries its own single-particle wave function over the ten
//! (port, spin) modes; the joint amplitude is a dense tensor indexed by one
//! mode per particle and is never (anti)symmetrized.

use num_complex::Complex;

use super::detection::{classify, matches, DetectionPattern};
use super::mode::{beam_splitter_image, control_rotation_image, Mode, Port, Spin};
use crate::error::{Error, Result};
use crate::qubit::Sign;
use crate::scalar::{cis, frac_1_sqrt_2, real, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState<T> {
    particles: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> LabeledState<T> {
    /// `Σₖ cₖ |m₀⟩₀|m₁⟩₁…` where particle `j` occupies mode `mⱼ` of term `k`.
    pub fn from_configurations(particles: usize, terms: &[(Complex<T>, Vec<Mode>)]) -> Result<Self> {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); Mode::COUNT.pow(particles as u32)];
        for (c, modes) in terms {
            if modes.len() != particles {
                return Err(Error::Argument(format!("configuration of {} modes for {particles} particles", modes.len())));
            }
            amplitudes[Self::flat_index(modes)] += c;
        }
        Ok(Self { particles, amplitudes })
    }

    fn flat_index(modes: &[Mode]) -> usize {
        modes.iter().fold(0, |acc, m| acc * Mode::COUNT + m.index())
    }

    fn configuration(&self, mut index: usize) -> Vec<Mode> {
        let mut modes = vec![Mode::from_index(0); self.particles];
        for slot in modes.iter_mut().rev() {
            *slot = Mode::from_index(index % Mode::COUNT);
            index /= Mode::COUNT;
        }
        modes
    }

    /// Particles 0, 1, 2 enter at `a`, `b`, `c` with spins
    /// `(|↑↓→⟩ + e^{iφ}|↓↑←⟩)/√2`.
    pub fn hom_input(phi: T) -> Self {
        let h = frac_1_sqrt_2::<T>();
        let m = |p, s| Mode::new(p, s);
        let (a, b, c) = (Port::InputA, Port::InputB, Port::Control);
        let (u, d) = (Spin::Up, Spin::Down);
        let e = cis(phi);
        Self::from_configurations(
            3,
            &[
                (real(h * h), vec![m(a, u), m(b, d), m(c, u)]),
                (real(h * h), vec![m(a, u), m(b, d), m(c, d)]),
                (e * (h * h), vec![m(a, d), m(b, u), m(c, u)]),
                (-e * (h * h), vec![m(a, d), m(b, u), m(c, d)]),
            ],
        )
        .expect("three particles")
    }

    /// Particles 0, 1 at `a`, `b` with spins `(|↑↓⟩ ± e^{iφ}|↓↑⟩)/√2`.
    pub fn hom_pair(phi: T, sign: Sign) -> Self {
        let h = frac_1_sqrt_2::<T>();
        let m = |p, s| Mode::new(p, s);
        Self::from_configurations(
            2,
            &[
                (real(h), vec![m(Port::InputA, Spin::Up), m(Port::InputB, Spin::Down)]),
                (
                    cis(phi) * (h * sign.value::<T>()),
                    vec![m(Port::InputA, Spin::Down), m(Port::InputB, Spin::Up)],
                ),
            ],
        )
        .expect("two particles")
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |a, c| a + c.norm_sqr())
    }

    /// Applies the same single-particle linear map to every particle in turn.
    pub fn map_each_particle<F>(&self, image: F) -> Self
    where
        F: Fn(Mode) -> Option<Vec<(Mode, Complex<T>)>>,
    {
        let mut current = self.amplitudes.clone();
        let stride_base = Mode::COUNT;
        for particle in 0..self.particles {
            let stride = stride_base.pow((self.particles - 1 - particle) as u32);
            let mut next = vec![Complex::new(T::zero(), T::zero()); current.len()];
            for (i, amp) in current.iter().enumerate() {
                if amp.norm_sqr() == T::zero() {
                    continue;
                }
                let mode_idx = (i / stride) % Mode::COUNT;
                let base = i - mode_idx * stride;
                match image(Mode::from_index(mode_idx)) {
                    Some(images) => {
                        for (m, k) in images {
                            next[base + m.index() * stride] += amp * k;
                        }
                    }
                    None => next[i] += amp,
                }
            }
            current = next;
        }
        Self { particles: self.particles, amplitudes: current }
    }

    pub fn beam_splitter(&self) -> Self {
        self.map_each_particle(beam_splitter_image::<T>)
    }

    pub fn rotate_control(&self, angle: T) -> Self {
        self.map_each_particle(|m| control_rotation_image(m, angle))
    }

    /// Probability of `pattern` for a post-splitter labeled state.
    pub fn event_probability(&self, pattern: &DetectionPattern) -> Result<T> {
        let norm = self.norm_sqr();
        let mut total = T::zero();
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == T::zero() {
                continue;
            }
            let event = classify(&self.configuration(i))?;
            if pattern.control.is_some() && event.control.is_none() {
                return Err(Error::Domain("pattern conditions on a control particle the state lacks".into()));
            }
            if matches(&event, pattern) {
                total += p;
            }
        }
        Ok(total / norm)
    }
}

/// HOM detection probability for distinguishable particles prepared with
/// phase `phi`, control read out after rotating by `control_angle`.
pub fn distinguishable_event_probability<T: Real>(
    phi: T,
    control_angle: T,
    pattern: &DetectionPattern,
) -> Result<T> {
    LabeledState::hom_input(phi)
        .rotate_control(control_angle)
        .beam_splitter()
        .event_probability(pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::detection::PortPattern;

    #[test]
    fn distinguishable_column() {
        for (ports, want) in [(PortPattern::AB, 0.5), (PortPattern::AA, 0.25), (PortPattern::BB, 0.25)] {
            for phi in [0.0, 1.0, 2.5] {
                let p: f64 = distinguishable_event_probability(phi, 0.0, &DetectionPattern::ports(ports)).unwrap();
                assert!((p - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn propagation_is_norm_preserving() {
        let s = LabeledState::<f64>::hom_input(0.4).beam_splitter().rotate_control(0.9);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn input_ports_rejected() {
        let s = LabeledState::<f64>::hom_input(0.0);
        assert!(s.event_probability(&DetectionPattern::ports(PortPattern::AB)).is_err());
    }
}
