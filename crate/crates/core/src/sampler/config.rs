use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Statistics;
use crate::protocols::metrology::MAX_PARTICLES;
use crate::protocols::ChshSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Hom,
    Chsh,
    Metrology,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Hom => "hom",
            ExperimentKind::Chsh => "chsh",
            ExperimentKind::Metrology => "metrology",
        }
    }

    /// Control basis angle that erases which-way information for this experiment.
    ///
    /// The HOM and CHSH control is encoded in →/←, so a direct σ_z readout
    /// separates the relative states; the metrology control is a GHZ member
    /// and needs the π/2 rotation.
    pub fn eraser_angle(self) -> f64 {
        match self {
            ExperimentKind::Hom | ExperimentKind::Chsh => 0.0,
            ExperimentKind::Metrology => std::f64::consts::FRAC_PI_2,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hom" => Ok(ExperimentKind::Hom),
            "chsh" => Ok(ExperimentKind::Chsh),
            "metrology" | "phase-est" => Ok(ExperimentKind::Metrology),
            other => Err(Error::Config(format!("unknown experiment kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Three-party entangled source; the control stream is a real measurement.
    Quantum,
    /// A classical agent flips a fair coin to choose between the two relative
    /// states and keeps the coin as the control stream.
    ClassicalMixture,
}

/// Everything needed to reproduce a sampled run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub phi: f64,
    /// HOM only.
    pub statistics: Option<Statistics>,
    /// Metrology only: interferometer particle count.
    pub n: Option<usize>,
    /// CHSH only: each shot draws one of the four setting pairs uniformly.
    pub settings: Option<ChshSettings<f64>>,
    /// Metrology only: shot `i` uses `thetas[i % thetas.len()]`.
    pub thetas: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub control_basis_angle: f64,
    pub mode: SamplingMode,
}

impl ExperimentConfig {
    pub fn hom(phi: f64, statistics: Statistics, shots: u64, seed: u64) -> Self {
        Self {
            kind: ExperimentKind::Hom,
            phi,
            statistics: Some(statistics),
            n: None,
            settings: None,
            thetas: Vec::new(),
            shots,
            seed,
            control_basis_angle: ExperimentKind::Hom.eraser_angle(),
            mode: SamplingMode::Quantum,
        }
    }

    pub fn chsh(phi: f64, settings: ChshSettings<f64>, shots: u64, seed: u64) -> Self {
        Self {
            kind: ExperimentKind::Chsh,
            phi,
            statistics: None,
            n: None,
            settings: Some(settings),
            thetas: Vec::new(),
            shots,
            seed,
            control_basis_angle: ExperimentKind::Chsh.eraser_angle(),
            mode: SamplingMode::Quantum,
        }
    }

    pub fn metrology(n: usize, phi: f64, thetas: Vec<f64>, shots: u64, seed: u64) -> Self {
        Self {
            kind: ExperimentKind::Metrology,
            phi,
            statistics: None,
            n: Some(n),
            settings: None,
            thetas,
            shots,
            seed,
            control_basis_angle: ExperimentKind::Metrology.eraser_angle(),
            mode: SamplingMode::Quantum,
        }
    }

    pub fn with_mode(self, mode: SamplingMode) -> Self {
        Self { mode, ..self }
    }

    pub fn with_control_angle(self, control_basis_angle: f64) -> Self {
        Self { control_basis_angle, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        if !self.phi.is_finite() || !self.control_basis_angle.is_finite() {
            return Err(Error::Config("angles must be finite".into()));
        }
        match self.kind {
            ExperimentKind::Hom => {
                if self.statistics.is_none() {
                    return Err(Error::Config("hom requires a statistics tag".into()));
                }
            }
            ExperimentKind::Chsh => {
                let s = self.settings.ok_or_else(|| Error::Config("chsh requires angle settings".into()))?;
                if ![s.theta_a0, s.theta_a1, s.theta_b0, s.theta_b1].iter().all(|a| a.is_finite()) {
                    return Err(Error::Config("angles must be finite".into()));
                }
            }
            ExperimentKind::Metrology => {
                let n = self.n.ok_or_else(|| Error::Config("metrology requires a particle count".into()))?;
                if !(1..=MAX_PARTICLES).contains(&n) {
                    return Err(Error::Config(format!("particle count must lie in 1..={MAX_PARTICLES}")));
                }
                if self.thetas.is_empty() {
                    return Err(Error::Config("metrology requires at least one phase value".into()));
                }
                if !self.thetas.iter().all(|t| t.is_finite()) {
                    return Err(Error::Config("angles must be finite".into()));
                }
                if self.statistics.is_some() {
                    return Err(Error::Config("statistics tag does not apply to metrology".into()));
                }
            }
        }
        Ok(())
    }
}
