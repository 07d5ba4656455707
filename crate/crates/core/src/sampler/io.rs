//! Stream serialization with an embedded reproduction header.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::record::{ControlRecord, MeasurementRecord, ShotSettings};
use super::run::{Streams, GENERATOR_ID};
use crate::error::Result;

/// Enough to reproduce a run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub generator: String,
    pub version: String,
}

impl RunMetadata {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            config: config.clone(),
            seed: config.seed,
            generator: GENERATOR_ID.to_string(),
            version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }

    /// `# key: value` lines placed ahead of CSV content.
    pub fn header(&self) -> Result<String> {
        Ok(format!(
            "# config: {}\n# seed: {}\n# generator: {}\n# version: {}\n",
            serde_json::to_string(&self.config)?,
            self.seed,
            self.generator,
            self.version
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamFormat {
    Csv,
    Ndjson,
}

impl StreamFormat {
    fn extension(self) -> &'static str {
        match self {
            StreamFormat::Csv => "csv",
            StreamFormat::Ndjson => "ndjson",
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_system_csv<W: Write>(mut w: W, meta: &RunMetadata, records: &[MeasurementRecord]) -> Result<()> {
    w.write_all(meta.header()?.as_bytes())?;
    writeln!(w, "shot_index,experiment,outcome,setting_a,setting_b,theta_a,theta_b,theta")?;
    for r in records {
        let (a, b, ta, tb, t) = match r.settings {
            ShotSettings::None => (None, None, None, None, None),
            ShotSettings::Chsh { a, b, theta_a, theta_b } => (Some(a), Some(b), Some(theta_a), Some(theta_b), None),
            ShotSettings::Phase { theta } => (None, None, None, None, Some(theta)),
        };
        writeln!(w, "{},{},{},{},{},{},{},{}", r.shot_index, r.experiment, r.outcome, opt(a), opt(b), opt(ta), opt(tb), opt(t))?;
    }
    Ok(())
}

pub fn write_control_csv<W: Write>(mut w: W, meta: &RunMetadata, records: &[ControlRecord]) -> Result<()> {
    w.write_all(meta.header()?.as_bytes())?;
    writeln!(w, "shot_index,control_outcome,basis_angle")?;
    for r in records {
        writeln!(w, "{},{},{}", r.shot_index, r.control_outcome.value(), opt(r.basis_angle))?;
    }
    Ok(())
}

/// One JSON object per line; the first line is `{"metadata": …}`.
pub fn write_ndjson<W: Write, R: Serialize>(mut w: W, meta: &RunMetadata, records: &[R]) -> Result<()> {
    serde_json::to_writer(&mut w, &serde_json::json!({ "metadata": meta }))?;
    w.write_all(b"\n")?;
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes `system.<ext>` and `control.<ext>` into `dir` and returns their paths.
pub fn write_streams(dir: &Path, meta: &RunMetadata, streams: &Streams, format: StreamFormat) -> Result<[PathBuf; 2]> {
    fs::create_dir_all(dir)?;
    let system = dir.join(format!("system.{}", format.extension()));
    let control = dir.join(format!("control.{}", format.extension()));
    let mut sys_buf = Vec::new();
    let mut ctl_buf = Vec::new();
    match format {
        StreamFormat::Csv => {
            write_system_csv(&mut sys_buf, meta, &streams.system)?;
            write_control_csv(&mut ctl_buf, meta, &streams.control)?;
        }
        StreamFormat::Ndjson => {
            write_ndjson(&mut sys_buf, meta, &streams.system)?;
            write_ndjson(&mut ctl_buf, meta, &streams.control)?;
        }
    }
    fs::write(&system, sys_buf)?;
    fs::write(&control, ctl_buf)?;
    Ok([system, control])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Statistics;
    use crate::sampler::run_experiment;

    #[test]
    fn csv_has_header_block() {
        let c = ExperimentConfig::hom(0.0, Statistics::Boson, 3, 5);
        let s = run_experiment(&c).unwrap();
        let mut buf = Vec::new();
        write_system_csv(&mut buf, &RunMetadata::new(&c), &s.system).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# config: {"));
        assert_eq!(lines[1], "# seed: 5");
        assert!(lines[2].contains("ChaCha8"));
        assert_eq!(lines[4], "shot_index,experiment,outcome,setting_a,setting_b,theta_a,theta_b,theta");
        assert_eq!(lines.len(), 8);
    }

    #[test]
    fn ndjson_round_trips() {
        let c = ExperimentConfig::metrology(2, 0.0, vec![0.1, 0.2], 4, 5);
        let s = run_experiment(&c).unwrap();
        let mut buf = Vec::new();
        write_ndjson(&mut buf, &RunMetadata::new(&c), &s.system).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let head: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
        let meta: RunMetadata = serde_json::from_value(head["metadata"].clone()).unwrap();
        assert_eq!(meta.config, c);
        let back: Vec<MeasurementRecord> = lines.map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back, s.system);
    }
}
