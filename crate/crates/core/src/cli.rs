//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::fock::Statistics;
use crate::protocols::chsh::{chsh_table, CHSH_ROW_LABELS};
use crate::protocols::{
    closed_form, hom_table_in_basis, optimal_chsh_angles, parity_expectation, phase_sensitivity, ChshSettings,
    Condition, MetrologySetup, Sensitivity,
};
use crate::sampler::{
    delayed_join, empirical_chsh, parity_by_theta, run_experiment, write_streams, EmpiricalTable, ExperimentConfig,
    ExperimentKind, JoinedData, RunMetadata, SamplingMode, StreamFormat, GENERATOR_ID,
};

#[derive(Debug, Parser, Serialize)]
#[command(name = "delayed-choice", version, about = "Delayed-choice HOM, conditional CHSH and GHZ phase estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
enum Command {
    /// Two-particle interferometer with conditional quantum statistics.
    Hom(HomArgs),
    /// Conditional CHSH test on the A–B relative states.
    Chsh(ChshArgs),
    /// GHZ parity interferometry with a delayed-choice control.
    PhaseEst(PhaseArgs),
    /// Run the analytic invariant suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    Analytic,
    Sample,
    ClassicalMixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StatisticsArg {
    Boson,
    Fermion,
    Distinguishable,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Boson => Statistics::Boson,
            StatisticsArg::Fermion => Statistics::Fermion,
            StatisticsArg::Distinguishable => Statistics::Distinguishable,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct Common {
    /// Relative phase φ of the prepared state.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Control rotation angle ϕ before its σ_z readout (default: the eraser basis).
    #[arg(long, allow_negative_numbers = true)]
    control_angle: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Analytic)]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write results here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Read every angle flag in degrees.
    #[arg(long)]
    degrees: bool,
    /// Also write the raw system and control streams (CSV) into this directory.
    #[arg(long)]
    streams: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct HomArgs {
    #[arg(long, value_enum, default_value_t = StatisticsArg::Boson)]
    statistics: StatisticsArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct ChshArgs {
    /// Settings θ_A⁰,θ_A¹,θ_B⁰,θ_B¹.
    #[arg(long, value_delimiter = ',', num_args = 4, allow_negative_numbers = true, conflicts_with = "optimize")]
    angles: Option<Vec<f64>>,
    /// Search for settings maximizing S on the C=up branch (default when no angles are given).
    #[arg(long)]
    optimize: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct PhaseArgs {
    /// Interferometer particle count.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Phase scan `start:stop:count`, stop exclusive.
    #[arg(long, default_value = "0:6.283185307179586:32", allow_hyphen_values = true)]
    theta_scan: String,
    /// Not applicable to phase estimation; rejected when given.
    #[arg(long, value_enum)]
    statistics: Option<StatisticsArg>,
    #[command(flatten)]
    common: Common,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Argument(_) | Error::Capacity { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type Rendered = std::result::Result<String, Failure>;

/// Parses `start:stop:count` into `count` evenly spaced values, stop excluded.
pub fn parse_theta_scan(scan: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = scan.split(':').collect();
    let bad = || Error::Config(format!("theta scan `{scan}` is not start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let step = (stop - start) / count as f64;
    Ok((0..count).map(|k| start + step * k as f64).collect())
}

fn to_radians(common: &Common, x: f64) -> f64 {
    if common.degrees { x.to_radians() } else { x }
}

fn header(cli: &Cli) -> Result<String, Failure> {
    let invocation = serde_json::to_string(cli).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(format!(
        "# invocation: {invocation}\n# generator: {GENERATOR_ID}\n# version: {} {}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    ))
}

fn sampling_mode(mode: Mode) -> SamplingMode {
    if mode == Mode::ClassicalMixture { SamplingMode::ClassicalMixture } else { SamplingMode::Quantum }
}

fn sample(config: &ExperimentConfig, common: &Common) -> Result<JoinedData, Failure> {
    let streams = run_experiment(config)?;
    if let Some(dir) = &common.streams {
        write_streams(dir, &RunMetadata::new(config), &streams, StreamFormat::Csv)?;
    }
    Ok(delayed_join(&streams.system, &streams.control)?)
}

fn hom(args: &HomArgs) -> Rendered {
    let c = &args.common;
    let stat: Statistics = args.statistics.into();
    let phi = to_radians(c, c.phi);
    let angle = c.control_angle.map(|a| to_radians(c, a)).unwrap_or(ExperimentKind::Hom.eraser_angle());
    let analytic = hom_table_in_basis(phi, stat, angle)?;
    if c.mode == Mode::Analytic {
        return Ok(match c.format {
            Format::Csv => analytic.to_csv(),
            Format::Summary => analytic.to_summary(&format!("HOM detection probabilities ({stat}, φ={phi}, ϕ={angle})")),
        });
    }
    let config = ExperimentConfig::hom(phi, stat, c.shots, c.seed)
        .with_control_angle(angle)
        .with_mode(sampling_mode(c.mode));
    let joined = sample(&config, c)?;
    let emp = EmpiricalTable::from_joined(&joined, ExperimentKind::Hom)?;
    Ok(match c.format {
        Format::Csv => emp.to_csv(),
        Format::Summary => {
            let mut s = format!("HOM sampled joint frequencies ({stat}, φ={phi}, ϕ={angle}, {} shots)\n", emp.total());
            let _ = writeln!(s, "{:<8}{:>26}{:>26}{:>26}", "outcome", "C=up", "C=down", "C=?");
            for r in 0..emp.rows() {
                let _ = write!(s, "{:<8}", emp.row_labels()[r]);
                for cond in Condition::ALL {
                    let cell = emp.cell(r, cond);
                    let z = cell.sigmas_from(analytic.get(r, cond), emp.total());
                    let _ = write!(s, "{:>26}", format!("{:.5}±{:.5} ({z:.1}σ)", cell.frequency, cell.std_error));
                }
                s.push('\n');
            }
            s
        }
    })
}

fn chsh(args: &ChshArgs) -> Rendered {
    let c = &args.common;
    let phi = to_radians(c, c.phi);
    let angle = c.control_angle.map(|a| to_radians(c, a)).unwrap_or(ExperimentKind::Chsh.eraser_angle());
    let settings = match &args.angles {
        Some(a) => {
            let a: Vec<f64> = a.iter().map(|x| to_radians(c, *x)).collect();
            ChshSettings::new(a[0], a[1], a[2], a[3])?
        }
        None => optimal_chsh_angles(phi, Condition::Up)?,
    };
    let settings_line = format!(
        "settings θA0={} θA1={} θB0={} θB1={}",
        settings.theta_a0, settings.theta_a1, settings.theta_b0, settings.theta_b1
    );
    if c.mode == Mode::Analytic {
        let values: Vec<(Condition, f64)> = Condition::ALL
            .iter()
            .map(|cond| Ok((*cond, crate::protocols::chsh_value(&settings, phi, *cond)?)))
            .collect::<Result<_, Error>>()?;
        return Ok(match c.format {
            Format::Csv => {
                let mut s = String::from("setting_a,setting_b,outcome,C=up,C=down,C=?\n");
                for a in 0..2 {
                    for b in 0..2 {
                        let t = chsh_table(settings.theta_a(a), settings.theta_b(b), phi)?;
                        for (r, label) in CHSH_ROW_LABELS.iter().enumerate() {
                            let [u, d, m] = Condition::ALL.map(|cond| t.get(r, cond));
                            let _ = writeln!(s, "{a},{b},{label},{u},{d},{m}");
                        }
                    }
                }
                s
            }
            Format::Summary => {
                let mut s = format!("CHSH analytic (φ={phi})\n{settings_line}\n");
                for (cond, v) in values {
                    let _ = writeln!(s, "S[{cond}] = {v:.12}");
                }
                let _ = writeln!(s, "Tsirelson bound 2√2 = {:.12}", 2.0 * std::f64::consts::SQRT_2);
                s
            }
        });
    }
    let config = ExperimentConfig::chsh(phi, settings, c.shots, c.seed)
        .with_control_angle(angle)
        .with_mode(sampling_mode(c.mode));
    let joined = sample(&config, c)?;
    let mut rows = Vec::new();
    for (label, set) in [("C=up", &joined.up), ("C=down", &joined.down), ("C=?", &joined.unjoined)] {
        let e = empirical_chsh(set)?;
        rows.push((label, e, set.len()));
    }
    Ok(match c.format {
        Format::Csv => {
            let mut s = String::from("condition,S,sigma,significance_vs_2,shots\n");
            for (label, e, n) in rows {
                let _ = writeln!(s, "{label},{},{},{},{n}", e.s, e.sigma, e.significance_over_classical());
            }
            s
        }
        Format::Summary => {
            let mut s = format!("CHSH sampled (φ={phi}, ϕ={angle}, {} shots)\n{settings_line}\n", joined.unjoined.len());
            for (label, e, n) in rows {
                let _ = writeln!(
                    s,
                    "{label:<7} S = {:+.4} ± {:.4}  ({}, {n} shots)",
                    e.s,
                    e.sigma,
                    if label == "C=?" {
                        format!("{:.1}σ from 0", e.s.abs() / e.sigma)
                    } else {
                        format!("{:+.1}σ above 2", e.significance_over_classical())
                    }
                );
            }
            s
        }
    })
}

fn phase_est(args: &PhaseArgs) -> Rendered {
    let c = &args.common;
    if let Some(stat) = args.statistics {
        return Err(Failure::Usage(format!(
            "--statistics {} does not apply to phase-est (the interferometer carries spins only)",
            Statistics::from(stat)
        )));
    }
    let phi = to_radians(c, c.phi);
    let angle = c.control_angle.map(|a| to_radians(c, a)).unwrap_or(ExperimentKind::Metrology.eraser_angle());
    let thetas: Vec<f64> = parse_theta_scan(&args.theta_scan)?.into_iter().map(|t| to_radians(c, t)).collect();
    let eraser = (angle - std::f64::consts::FRAC_PI_2).abs() <= 1e-6;
    if c.mode == Mode::Analytic {
        let mut rows = Vec::with_capacity(thetas.len());
        for &theta in &thetas {
            let setup = MetrologySetup::new(args.n, theta, phi, angle)?;
            let up = parity_expectation(&setup, Condition::Up)?;
            let down = parity_expectation(&setup, Condition::Down)?;
            let mixed = parity_expectation(&setup, Condition::Unconditioned)?;
            let fringe = closed_form::parity_fringe(args.n, theta, phi);
            let sens = if eraser {
                match phase_sensitivity(&setup)? {
                    Sensitivity::Finite(v) => v.to_string(),
                    Sensitivity::Divergent { .. } => "divergent".into(),
                }
            } else {
                String::new()
            };
            rows.push((theta, up, down, mixed, fringe, sens));
        }
        return Ok(match c.format {
            Format::Csv => {
                let mut s = String::from("theta,parity_up,parity_down,parity_marginal,fringe_closed_form,sensitivity\n");
                for (t, u, d, m, f, v) in rows {
                    let _ = writeln!(s, "{t},{u},{d},{m},{f},{v}");
                }
                s
            }
            Format::Summary => {
                let mut s = format!("Parity fringe (n={}, φ={phi}, ϕ={angle})\n", args.n);
                let _ = writeln!(s, "Heisenberg limit 1/n² = {}", closed_form::heisenberg_limit::<f64>(args.n));
                let _ = writeln!(s, "{:>12}{:>14}{:>14}{:>14}{:>16}", "theta", "<P>|C=up", "<P>|C=down", "<P>", "(Δθ)²");
                for (t, u, d, m, _, v) in rows {
                    let _ = writeln!(s, "{t:>12.6}{u:>14.8}{d:>14.8}{m:>14.8}{v:>16}");
                }
                s
            }
        });
    }
    let config = ExperimentConfig::metrology(args.n, phi, thetas, c.shots, c.seed)
        .with_control_angle(angle)
        .with_mode(sampling_mode(c.mode));
    let joined = sample(&config, c)?;
    let up = parity_by_theta(&joined.up)?;
    let down = parity_by_theta(&joined.down)?;
    let all = parity_by_theta(&joined.unjoined)?;
    let lookup = |v: &[(f64, crate::sampler::ParityEstimate)], t: f64| {
        v.iter().find(|(x, _)| x.to_bits() == t.to_bits()).map(|(_, e)| *e)
    };
    let mut s = match c.format {
        Format::Csv => String::from("theta,mean_up,se_up,mean_down,se_down,mean_marginal,se_marginal\n"),
        Format::Summary => format!(
            "Sampled parity (n={}, φ={phi}, ϕ={angle}, {} shots)\n{:>12}{:>22}{:>22}{:>22}\n",
            args.n,
            joined.unjoined.len(),
            "theta",
            "<P>|C=up",
            "<P>|C=down",
            "<P>"
        ),
    };
    for (theta, m) in &all {
        let cell = |e: Option<crate::sampler::ParityEstimate>| e.map(|e| (e.mean, e.sigma));
        let u = cell(lookup(&up, *theta));
        let d = cell(lookup(&down, *theta));
        let f = |x: Option<(f64, f64)>, i: usize| x.map(|p| if i == 0 { p.0 } else { p.1 }.to_string()).unwrap_or_default();
        match c.format {
            Format::Csv => {
                let _ = writeln!(s, "{theta},{},{},{},{},{},{}", f(u, 0), f(u, 1), f(d, 0), f(d, 1), m.mean, m.sigma);
            }
            Format::Summary => {
                let pm = |x: Option<(f64, f64)>| x.map(|(a, b)| format!("{a:+.4}±{b:.4}")).unwrap_or_else(|| "-".into());
                let _ = writeln!(s, "{theta:>12.6}{:>22}{:>22}{:>22}", pm(u), pm(d), pm(Some((m.mean, m.sigma))));
            }
        }
    }
    Ok(s)
}

fn verify() -> (String, bool) {
    let results = crate::verify::run_all();
    let mut s = String::new();
    for r in &results {
        if r.passed {
            let _ = writeln!(s, "PASS {}", r.name);
        } else {
            let _ = writeln!(s, "FAIL {}: {}", r.name, r.detail);
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "{passed} passed, {} failed", results.len() - passed);
    (s, passed == results.len())
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("usage error"));
            return 2;
        }
    };
    if let Command::Verify = cli.command {
        let (text, ok) = verify();
        print!("{text}");
        return if ok { 0 } else { 1 };
    }
    let (result, common) = match &cli.command {
        Command::Hom(a) => (hom(a), &a.common),
        Command::Chsh(a) => (chsh(a), &a.common),
        Command::PhaseEst(a) => (phase_est(a), &a.common),
        Command::Verify => unreachable!("handled above"),
    };
    let body = result.and_then(|body| {
        let head = if common.format == Format::Csv { header(&cli)? } else { String::new() };
        emit(&(head + &body), common.output.as_ref())
    });
    match body {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}
