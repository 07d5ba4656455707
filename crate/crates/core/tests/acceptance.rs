//! Acceptance criteria, one line of output per criterion.

use std::f64::consts::{PI, SQRT_2};
use std::process::Command;
use std::time::{Duration, Instant};

use delayed_choice::fock::Statistics;
use delayed_choice::protocols::closed_form;
use delayed_choice::protocols::{
    chsh_table, chsh_value, ghz_decomposition_residual, hom_table, optimal_chsh_angles, parity_expectation,
    phase_sensitivity, Condition, MetrologySetup, Sensitivity,
};
use delayed_choice::qubit::{tripartite_spin_state, DensityMatrix};
use delayed_choice::sampler::{
    chi_square_homogeneity, delayed_join, empirical_chsh, joint_counts, run_experiment, write_control_csv,
    write_ndjson, write_system_csv, EmpiricalTable, ExperimentConfig, ExperimentKind, RunMetadata, SamplingMode,
};

type Verdict = Result<String, String>;

fn phases(count: usize) -> Vec<f64> {
    (0..count).map(|k| -PI + 2.0 * PI * k as f64 / count as f64 + 0.017).collect()
}

fn within(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want} (tol {tol})"))
    }
}

fn budget(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    if spent < limit { Ok(()) } else { Err(format!("took {spent:?}, budget {limit:?}")) }
}

fn hom_reproduction() -> Verdict {
    let start = Instant::now();
    for phi in phases(32) {
        for (stat, shift) in [(Statistics::Boson, 0.0), (Statistics::Fermion, PI)] {
            let t = hom_table(phi, stat).map_err(|e| e.to_string())?;
            for (r, row) in closed_form::hom_table(phi + shift).iter().enumerate() {
                for (cond, want) in Condition::ALL.iter().zip(row) {
                    within(t.get(r, *cond), *want, 1e-12, &format!("{stat} φ={phi} row {r} {cond}"))?;
                }
            }
        }
    }
    budget(start, Duration::from_secs(1))?;
    Ok(format!("64 tables in {:?}", start.elapsed()))
}

fn chsh_reproduction() -> Verdict {
    let mut n = 0;
    for (i, ta) in [0.0, 0.9, -2.1, 2.8].into_iter().enumerate() {
        for (j, tb) in [0.4, -1.3, 3.0, 1.7].into_iter().enumerate() {
            let phi = 0.37 * (4 * i + j) as f64 - 2.5;
            let t = chsh_table(ta, tb, phi).map_err(|e| e.to_string())?;
            for (r, row) in closed_form::chsh_table(ta - tb + phi).iter().enumerate() {
                for (cond, want) in Condition::ALL.iter().zip(row) {
                    within(t.get(r, *cond), *want, 1e-12, &format!("({ta},{tb},{phi}) row {r} {cond}"))?;
                }
                within(t.get(r, Condition::Unconditioned), 0.25, 1e-12, "flat marginal")?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} triples"))
}

fn chsh_saturation() -> Verdict {
    let start = Instant::now();
    for phi in [0.0, 0.7, PI / 3.0] {
        for cond in [Condition::Up, Condition::Down] {
            let s = optimal_chsh_angles(phi, cond).map_err(|e| e.to_string())?;
            let v = chsh_value(&s, phi, cond).map_err(|e| e.to_string())?;
            within(v, 2.0 * SQRT_2, 1e-9, &format!("analytic S at φ={phi} {cond}"))?;
        }
    }
    let settings = optimal_chsh_angles(0.0, Condition::Up).map_err(|e| e.to_string())?;
    let streams = run_experiment(&ExperimentConfig::chsh(0.0, settings, 100_000, 7)).map_err(|e| e.to_string())?;
    let joined = delayed_join(&streams.system, &streams.control).map_err(|e| e.to_string())?;
    let up = empirical_chsh(&joined.up).map_err(|e| e.to_string())?;
    let mixed = empirical_chsh(&joined.unjoined).map_err(|e| e.to_string())?;
    if up.significance_over_classical() < 5.0 {
        return Err(format!("joined |S| = {} ± {} is not 5σ above 2", up.s.abs(), up.sigma));
    }
    if mixed.s.abs() >= 5.0 * mixed.sigma {
        return Err(format!("unjoined S = {} ± {} is not consistent with 0", mixed.s, mixed.sigma));
    }
    budget(start, Duration::from_secs(30))?;
    Ok(format!(
        "joined |S| = {:.4} ± {:.4} ({:.1}σ over 2), unjoined S = {:+.4} ± {:.4}",
        up.s.abs(),
        up.sigma,
        up.significance_over_classical(),
        mixed.s,
        mixed.sigma
    ))
}

fn ghz_residual() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 1..=12 {
        for phi in [0.0, PI / 3.0, 1.234] {
            let r = ghz_decomposition_residual(n, phi).map_err(|e| e.to_string())?;
            if r >= 1e-12 {
                return Err(format!("n={n} φ={phi}: residual {r}"));
            }
            worst = worst.max(r);
        }
    }
    Ok(format!("largest residual {worst:e}"))
}

fn parity_fringes() -> Verdict {
    let phi = 0.4;
    for n in 1..=10 {
        for theta in phases(16) {
            let s = MetrologySetup::eraser(n, theta, phi).map_err(|e| e.to_string())?;
            let got = parity_expectation(&s, Condition::Up).map_err(|e| e.to_string())?;
            within(got, closed_form::parity_fringe(n, theta, phi), 1e-10, &format!("fringe n={n} θ={theta}"))?;
            let mixed = parity_expectation(&s, Condition::Unconditioned).map_err(|e| e.to_string())?;
            within(mixed, 0.0, 1e-12, &format!("unconditioned n={n} θ={theta}"))?;
            let ww = MetrologySetup::new(n, theta, phi, 0.0).map_err(|e| e.to_string())?;
            for cond in [Condition::Up, Condition::Down] {
                let v = parity_expectation(&ww, cond).map_err(|e| e.to_string())?;
                within(v, 0.0, 1e-12, &format!("which-way n={n} θ={theta} {cond}"))?;
            }
        }
    }
    Ok("n = 1..10 × 16 phases".into())
}

fn heisenberg_limit() -> Verdict {
    let phi = 0.4;
    let mut evaluated = 0;
    for n in 1..=10 {
        for theta in phases(16) {
            if (n as f64 * theta + phi).sin().abs() < 1e-3 {
                continue;
            }
            let s = MetrologySetup::eraser(n, theta, phi).map_err(|e| e.to_string())?;
            match phase_sensitivity(&s).map_err(|e| e.to_string())? {
                Sensitivity::Finite(v) => within(v * (n * n) as f64, 1.0, 1e-9, &format!("n={n} θ={theta}"))?,
                Sensitivity::Divergent { slope } => return Err(format!("n={n} θ={theta}: stationary slope {slope}")),
            }
            evaluated += 1;
        }
    }
    Ok(format!("{evaluated} points"))
}

fn marginal_flatness() -> Verdict {
    let stats = [Statistics::Boson, Statistics::Fermion, Statistics::Distinguishable];
    for phi in phases(32) {
        for stat in stats {
            let t = hom_table(phi, stat).map_err(|e| e.to_string())?;
            for (r, want) in [0.5, 0.25, 0.25].into_iter().enumerate() {
                within(t.get(r, Condition::Unconditioned), want, 1e-12, &format!("{stat} φ={phi} row {r}"))?;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (k, stat) in stats.into_iter().enumerate() {
        let config = ExperimentConfig::hom(0.3 + k as f64, stat, 100_000, 100 + k as u64);
        let streams = run_experiment(&config).map_err(|e| e.to_string())?;
        let joined = delayed_join(&streams.system, &streams.control).map_err(|e| e.to_string())?;
        let emp = EmpiricalTable::from_joined(&joined, ExperimentKind::Hom).map_err(|e| e.to_string())?;
        for (r, want) in [0.5, 0.25, 0.25].into_iter().enumerate() {
            let z = emp.cell(r, Condition::Unconditioned).sigmas_from(want, emp.total());
            if z > 5.0 {
                return Err(format!("{stat} row {r}: unjoined frequency {z:.1}σ from {want}"));
            }
            worst = worst.max(z);
        }
    }
    Ok(format!("sampled unjoined cells within {worst:.2}σ"))
}

fn zero_discord() -> Verdict {
    let target = DensityMatrix::<f64>::zero_discord_mixture();
    for phi in phases(16) {
        let rho = tripartite_spin_state(phi).partial_trace(&[0, 1]).map_err(|e| e.to_string())?;
        within(rho.max_abs_diff(&target), 0.0, 1e-12, &format!("φ={phi}"))?;
    }
    Ok("16 phases".into())
}

fn mixture_equivalence() -> Verdict {
    let settings = optimal_chsh_angles(0.0, Condition::Up).map_err(|e| e.to_string())?;
    let configs = [
        ExperimentConfig::hom(0.6, Statistics::Boson, 100_000, 21),
        ExperimentConfig::chsh(0.0, settings, 100_000, 22),
        ExperimentConfig::metrology(4, 0.2, vec![0.0, 0.3, 0.9, 1.4], 100_000, 23),
    ];
    let mut report = Vec::new();
    for quantum in configs {
        let classical = ExperimentConfig { seed: quantum.seed + 1000, ..quantum.clone() }.with_mode(SamplingMode::ClassicalMixture);
        let counts = |c: &ExperimentConfig| -> Result<_, String> {
            let s = run_experiment(c).map_err(|e| e.to_string())?;
            Ok(joint_counts(&delayed_join(&s.system, &s.control).map_err(|e| e.to_string())?))
        };
        let test = chi_square_homogeneity(&counts(&quantum)?, &counts(&classical)?).map_err(|e| e.to_string())?;
        if test.p_value <= 0.001 {
            return Err(format!("{}: χ² = {:.2} on {} dof, p = {:.2e}", quantum.kind, test.statistic, test.degrees_of_freedom, test.p_value));
        }
        report.push(format!("{} p={:.3}", quantum.kind, test.p_value));
    }
    Ok(report.join(", "))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let settings = optimal_chsh_angles(0.0, Condition::Up).map_err(|e| e.to_string())?;
    let configs = [
        ExperimentConfig::hom(0.3, Statistics::Fermion, 20_000, 5),
        ExperimentConfig::chsh(0.2, settings, 20_000, 5),
        ExperimentConfig::metrology(3, 0.0, vec![0.1, 0.2], 20_000, 5).with_mode(SamplingMode::ClassicalMixture),
    ];
    for config in &configs {
        let render = || -> Result<Vec<u8>, String> {
            let s = run_experiment(config).map_err(|e| e.to_string())?;
            let meta = RunMetadata::new(config);
            let mut buf = Vec::new();
            write_system_csv(&mut buf, &meta, &s.system).map_err(|e| e.to_string())?;
            write_control_csv(&mut buf, &meta, &s.control).map_err(|e| e.to_string())?;
            write_ndjson(&mut buf, &meta, &s.system).map_err(|e| e.to_string())?;
            Ok(buf)
        };
        let (a, b) = (render()?, render()?);
        let (pa, pb) = (dir.path().join("a.out"), dir.path().join("b.out"));
        std::fs::write(&pa, &a).map_err(|e| e.to_string())?;
        std::fs::write(&pb, &b).map_err(|e| e.to_string())?;
        if std::fs::read(&pa).map_err(|e| e.to_string())? != std::fs::read(&pb).map_err(|e| e.to_string())? {
            return Err(format!("{} streams differ between runs", config.kind));
        }
    }
    let exe = env!("CARGO_BIN_EXE_delayed-choice");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = dir.path().join("run.csv");
        let streams = dir.path().join("streams");
        let status = Command::new(exe)
            .args(["chsh", "--phi", "0.3", "--mode", "sample", "--shots", "20000", "--seed", "11", "--output"])
            .arg(&out)
            .arg("--streams")
            .arg(&streams)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("binary exited with {status}"));
        }
        let mut bytes = std::fs::read(&out).map_err(|e| e.to_string())?;
        bytes.extend(std::fs::read(streams.join("system.csv")).map_err(|e| e.to_string())?);
        bytes.extend(std::fs::read(streams.join("control.csv")).map_err(|e| e.to_string())?);
        outputs.push(bytes);
    }
    if outputs[0] != outputs[1] {
        return Err("binary outputs differ between runs".into());
    }
    Ok("library writers and binary output byte-identical".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        ("HOM tables match the closed form for bosons and fermions", hom_reproduction),
        ("CHSH tables match the closed form, flat marginal", chsh_reproduction),
        ("CHSH saturation analytic and sampled", chsh_saturation),
        ("GHZ decomposition residual", ghz_residual),
        ("parity fringes, erasure and which-way loss", parity_fringes),
        ("Heisenberg-limited phase sensitivity", heisenberg_limit),
        ("HOM control-marginal flatness", marginal_flatness),
        ("zero-discord mixture after tracing the control", zero_discord),
        ("classical mixture indistinguishable from eraser-basis runs", mixture_equivalence),
        ("determinism of written outputs", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
