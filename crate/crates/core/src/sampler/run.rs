//! Shot generation.
//!
//! Every shot owns an independent ChaCha8 substream (`seed`, stream = shot
//! index), so shots can be generated in parallel and the output does not
//! depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind, SamplingMode};
use super::record::{ControlRecord, MeasurementRecord, ShotSettings, SystemOutcome};
use crate::error::{Error, Result};
use crate::fock::PortPattern;
use crate::protocols::chsh::{chsh_joint, pair_joint, CHSH_ROWS};
use crate::protocols::hom::{hom_pair_probability, hom_probability};
use crate::protocols::metrology::{parity_joint, parity_on_ghz, MetrologySetup};
use crate::protocols::Condition;
use crate::qubit::{Outcome, Sign};

/// Identifier of the random generator, recorded in run metadata.
pub const GENERATOR_ID: &str = "rand_chacha-0.3/ChaCha8Rng::seed_from_u64(seed)+set_stream(shot_index)";

/// System and control records of one run, both sorted by shot index.
#[derive(Debug, Clone, PartialEq)]
pub struct Streams {
    pub system: Vec<MeasurementRecord>,
    pub control: Vec<ControlRecord>,
}

/// Outcome distribution for one setting choice.
///
/// Quantum runs hold the joint law of (system outcome, control outcome);
/// mixture runs hold one conditional law per coin value.
#[derive(Debug, Clone)]
struct SettingLaw {
    settings: ShotSettings,
    joint: Vec<(SystemOutcome, Outcome, f64)>,
    conditional: [Vec<(SystemOutcome, f64)>; 2],
}

impl SettingLaw {
    fn joint(settings: ShotSettings, joint: Vec<(SystemOutcome, Outcome, f64)>) -> Self {
        Self { settings, joint, conditional: [Vec::new(), Vec::new()] }
    }

    fn mixture(settings: ShotSettings, plus: Vec<(SystemOutcome, f64)>, minus: Vec<(SystemOutcome, f64)>) -> Self {
        Self { settings, joint: Vec::new(), conditional: [plus, minus] }
    }
}

/// Index of the category selected by `draw ∈ [0, 1)`; categories of zero
/// weight are never returned.
fn pick(weights: impl Iterator<Item = f64> + Clone, draw: f64) -> usize {
    let total: f64 = weights.clone().sum();
    let target = draw * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if target < acc {
            return i;
        }
    }
    last
}

fn hom_laws(config: &ExperimentConfig) -> Result<Vec<SettingLaw>> {
    let stat = config.statistics.ok_or_else(|| Error::Config("hom requires a statistics tag".into()))?;
    Ok(vec![match config.mode {
        SamplingMode::Quantum => {
            let mut joint = Vec::new();
            for ports in PortPattern::ALL {
                for (c, cond) in [(Outcome::Plus, Condition::Up), (Outcome::Minus, Condition::Down)] {
                    let p = hom_probability(config.phi, stat, config.control_basis_angle, ports, cond)?;
                    joint.push((SystemOutcome::Ports(ports), c, p));
                }
            }
            SettingLaw::joint(ShotSettings::None, joint)
        }
        SamplingMode::ClassicalMixture => {
            let law = |sign| -> Result<Vec<_>> {
                PortPattern::ALL
                    .into_iter()
                    .map(|ports| Ok((SystemOutcome::Ports(ports), hom_pair_probability(config.phi, sign, stat, ports)?)))
                    .collect()
            };
            SettingLaw::mixture(ShotSettings::None, law(Sign::Plus)?, law(Sign::Minus)?)
        }
    }])
}

fn chsh_laws(config: &ExperimentConfig) -> Result<Vec<SettingLaw>> {
    let s = config.settings.ok_or_else(|| Error::Config("chsh requires angle settings".into()))?;
    let mut laws = Vec::with_capacity(4);
    for a in 0..2u8 {
        for b in 0..2u8 {
            let (theta_a, theta_b) = (s.theta_a(a as usize), s.theta_b(b as usize));
            let settings = ShotSettings::Chsh { a, b, theta_a, theta_b };
            let spins = CHSH_ROWS.map(|(a, b)| SystemOutcome::Spins { a, b });
            laws.push(match config.mode {
                SamplingMode::Quantum => {
                    let joint = chsh_joint(theta_a, theta_b, config.phi, config.control_basis_angle);
                    let cells = spins
                        .iter()
                        .zip(joint)
                        .flat_map(|(o, [up, down])| [(*o, Outcome::Plus, up), (*o, Outcome::Minus, down)])
                        .collect();
                    SettingLaw::joint(settings, cells)
                }
                SamplingMode::ClassicalMixture => {
                    let law = |sign| spins.iter().copied().zip(pair_joint(theta_a, theta_b, config.phi, sign)).collect();
                    SettingLaw::mixture(settings, law(Sign::Plus), law(Sign::Minus))
                }
            });
        }
    }
    Ok(laws)
}

fn metrology_laws(config: &ExperimentConfig) -> Result<Vec<SettingLaw>> {
    let n = config.n.ok_or_else(|| Error::Config("metrology requires a particle count".into()))?;
    config
        .thetas
        .iter()
        .map(|&theta| {
            let settings = ShotSettings::Phase { theta };
            let plus = SystemOutcome::Parity(Outcome::Plus);
            let minus = SystemOutcome::Parity(Outcome::Minus);
            Ok(match config.mode {
                SamplingMode::Quantum => {
                    let setup = MetrologySetup::new(n, theta, config.phi, config.control_basis_angle)?;
                    let j = parity_joint(&setup)?;
                    SettingLaw::joint(
                        settings,
                        vec![
                            (plus, Outcome::Plus, j[0][0]),
                            (plus, Outcome::Minus, j[0][1]),
                            (minus, Outcome::Plus, j[1][0]),
                            (minus, Outcome::Minus, j[1][1]),
                        ],
                    )
                }
                SamplingMode::ClassicalMixture => {
                    let law = |phase: f64| -> Result<Vec<_>> {
                        let m = parity_on_ghz(n, theta, phase)?;
                        Ok(vec![(plus, (1.0 + m) / 2.0), (minus, (1.0 - m) / 2.0)])
                    };
                    SettingLaw::mixture(settings, law(config.phi)?, law(config.phi + std::f64::consts::PI)?)
                }
            })
        })
        .collect()
}

fn laws(config: &ExperimentConfig) -> Result<Vec<SettingLaw>> {
    config.validate()?;
    match config.kind {
        ExperimentKind::Hom => hom_laws(config),
        ExperimentKind::Chsh => chsh_laws(config),
        ExperimentKind::Metrology => metrology_laws(config),
    }
}

fn generate(config: &ExperimentConfig, laws: &[SettingLaw]) -> Streams {
    let (system, control): (Vec<_>, Vec<_>) = (0..config.shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(shot);
            let law = match config.kind {
                ExperimentKind::Hom => &laws[0],
                ExperimentKind::Chsh => &laws[rng.gen_range(0..laws.len())],
                ExperimentKind::Metrology => &laws[(shot % laws.len() as u64) as usize],
            };
            let (outcome, control, basis_angle) = match config.mode {
                SamplingMode::Quantum => {
                    let k = pick(law.joint.iter().map(|c| c.2), rng.gen());
                    let (o, c, _) = law.joint[k];
                    (o, c, Some(config.control_basis_angle))
                }
                SamplingMode::ClassicalMixture => {
                    let coin = if rng.gen::<bool>() { Outcome::Plus } else { Outcome::Minus };
                    let cond = &law.conditional[usize::from(coin == Outcome::Minus)];
                    let k = pick(cond.iter().map(|c| c.1), rng.gen());
                    (cond[k].0, coin, None)
                }
            };
            (
                MeasurementRecord { shot_index: shot, experiment: config.kind, outcome, settings: law.settings },
                ControlRecord { shot_index: shot, control_outcome: control, basis_angle },
            )
        })
        .unzip();
    Streams { system, control }
}

/// Samples a run: each shot's joint outcome is drawn from the exact joint
/// distribution and then split into the system and control streams.
/// Mixture-mode configs are delegated to [`classical_mixture_run`].
pub fn run_experiment(config: &ExperimentConfig) -> Result<Streams> {
    if config.mode == SamplingMode::ClassicalMixture {
        return classical_mixture_run(config);
    }
    Ok(generate(config, &laws(config)?))
}

/// Classical baseline: per shot a fair coin picks one of the two relative
/// states, the system outcome is drawn from that pure state, and the coin
/// sequence stands in for the control stream.
pub fn classical_mixture_run(config: &ExperimentConfig) -> Result<Streams> {
    if config.mode != SamplingMode::ClassicalMixture {
        return Err(Error::Config("classical-mixture run needs mode = classical_mixture".into()));
    }
    Ok(generate(config, &laws(config)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Statistics;

    #[test]
    fn pick_skips_zero_weights() {
        let w = [0.0, 0.5, 0.0, 0.5, 0.0];
        assert_eq!(pick(w.iter().copied(), 0.0), 1);
        assert_eq!(pick(w.iter().copied(), 0.49), 1);
        assert_eq!(pick(w.iter().copied(), 0.5), 3);
        assert_eq!(pick(w.iter().copied(), 0.999_999_999), 3);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let c = ExperimentConfig::hom(0.3, Statistics::Boson, 500, 11);
        let a = run_experiment(&c).unwrap();
        assert_eq!(a, run_experiment(&c).unwrap());
        let other = run_experiment(&ExperimentConfig { seed: 12, ..c }).unwrap();
        assert_ne!(a.system, other.system);
    }

    #[test]
    fn boson_phi_zero_never_coincides_on_up() {
        let s = run_experiment(&ExperimentConfig::hom(0.0, Statistics::Boson, 2000, 3)).unwrap();
        for (m, c) in s.system.iter().zip(&s.control) {
            if c.control_outcome == Outcome::Plus {
                assert_ne!(m.outcome, SystemOutcome::Ports(PortPattern::AB));
            } else {
                assert_eq!(m.outcome, SystemOutcome::Ports(PortPattern::AB));
            }
        }
    }

    #[test]
    fn mode_mismatch_rejected() {
        let c = ExperimentConfig::hom(0.0, Statistics::Boson, 1, 1);
        assert!(classical_mixture_run(&c).is_err());
        let mix = c.with_mode(SamplingMode::ClassicalMixture);
        let s = run_experiment(&mix).unwrap();
        assert!(s.control[0].basis_angle.is_none());
    }
}
