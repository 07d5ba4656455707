//! Analytic invariant suite behind the `verify` subcommand.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{
    beam_splitter_substitute, event_probability, DetectionPattern, FockMonomial, FockPolynomial, Mode, Port,
    PortPattern, Spin, Statistics,
};
use crate::protocols::chsh::{chsh_correlator, chsh_table};
use crate::protocols::metrology::{parity_direct, parity_square_expectation};
use crate::protocols::{
    closed_form, ghz_decomposition_residual, hom_table, hom_table_in_basis, optimal_chsh_angles,
    parity_expectation, phase_sensitivity, ChshSettings, Condition, MetrologySetup, Sensitivity,
};
use crate::qubit::{
    bell_relative_state, ghz_state, local_unitary_overlap, tripartite_spin_state, DensityMatrix, Outcome,
    SingleQubitOperator, Sign, StateVector,
};
use crate::sampler::{delayed_join, run_experiment, ExperimentConfig};

type Check = std::result::Result<(), String>;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Check {
    if cond { Ok(()) } else { Err(detail()) }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn phases(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |k| -PI + 2.0 * PI * k as f64 / count as f64 + 0.013)
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector<f64> {
    let raw: Vec<Complex<f64>> = (0..1 << n).map(|_| Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, raw.into_iter().map(|a| a / norm).collect()).expect("normalized")
}

fn random_unitary(rng: &mut ChaCha8Rng) -> SingleQubitOperator<f64> {
    SingleQubitOperator::phase_z(rng.gen_range(-PI..PI))
        * SingleQubitOperator::rotation_y(rng.gen_range(-PI..PI))
        * SingleQubitOperator::phase_z(rng.gen_range(-PI..PI))
}

fn norm_preservation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let mut s = random_state(&mut rng, n);
        for _ in 0..5 {
            s = s.apply_single_qubit(rng.gen_range(0..n), &random_unitary(&mut rng)).map_err(err)?;
        }
        ensure((s.norm_sqr() - 1.0).abs() < 1e-12, || format!("norm² drifted to {}", s.norm_sqr()))?;
    }
    Ok(())
}

fn born_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let s = random_state(&mut rng, n);
        let basis = SingleQubitOperator::sigma_theta(rng.gen_range(-PI..PI));
        let q = rng.gen_range(0..n);
        let p = s.outcome_probability(q, &basis, Outcome::Plus).map_err(err)?
            + s.outcome_probability(q, &basis, Outcome::Minus).map_err(err)?;
        ensure((p - 1.0).abs() < 1e-12, || format!("branch weights sum to {p}"))?;
    }
    Ok(())
}

fn relative_state_identity() -> Check {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex::new(h, 0.0);
    for phi in phases(16) {
        let plus = bell_relative_state(phi, Sign::Plus).tensor(&StateVector::up()).map_err(err)?;
        let minus = bell_relative_state(phi, Sign::Minus).tensor(&StateVector::down()).map_err(err)?;
        let rhs = StateVector::superpose(&[(one, &plus), (one, &minus)]).map_err(err)?;
        let lhs = tripartite_spin_state(phi);
        let d = lhs.phase_fixed().max_abs_diff(&rhs.phase_fixed()).map_err(err)?;
        ensure(d < 1e-12, || format!("φ={phi}: difference {d}"))?;
    }
    Ok(())
}

fn zero_discord_mixture() -> Check {
    let target = DensityMatrix::<f64>::zero_discord_mixture();
    for phi in phases(16) {
        let rho = tripartite_spin_state(phi).partial_trace(&[0, 1]).map_err(err)?;
        let d = rho.max_abs_diff(&target);
        ensure(d < 1e-12, || format!("φ={phi}: difference {d}"))?;
    }
    Ok(())
}

fn sigma_theta_spectrum() -> Check {
    for theta in phases(64) {
        let [lo, hi] = SingleQubitOperator::<f64>::sigma_theta(theta).hermitian_eigenvalues();
        ensure((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12, || format!("θ={theta}: {lo}, {hi}"))?;
    }
    Ok(())
}

fn local_unitary_equivalence() -> Check {
    let us = [SingleQubitOperator::identity(), SingleQubitOperator::pauli_x(), SingleQubitOperator::hadamard()];
    for phi in phases(16) {
        let o = local_unitary_overlap(&tripartite_spin_state(phi), &ghz_state(3, phi).map_err(err)?, &us).map_err(err)?;
        ensure((o - 1.0).abs() < 1e-12, || format!("φ={phi}: overlap {o}"))?;
    }
    Ok(())
}

const STATS: [Statistics; 3] = [Statistics::Boson, Statistics::Fermion, Statistics::Distinguishable];

fn fock_unitarity() -> Check {
    for phi in phases(16) {
        for stat in STATS {
            let t = hom_table(phi, stat).map_err(err)?;
            let total = t.column_sum(Condition::Up) + t.column_sum(Condition::Down);
            ensure((total - 1.0).abs() < 1e-12, || format!("{stat} φ={phi}: total {total}"))?;
        }
    }
    Ok(())
}

fn marginal_flatness() -> Check {
    for phi in phases(32) {
        for stat in STATS {
            let t = hom_table(phi, stat).map_err(err)?;
            for (got, want) in t.column(Condition::Unconditioned).iter().zip([0.5, 0.25, 0.25]) {
                ensure((got - want).abs() < 1e-12, || format!("{stat} φ={phi}: {got} vs {want}"))?;
            }
        }
    }
    Ok(())
}

fn boson_fermion_duality() -> Check {
    for phi in phases(32) {
        let b = hom_table(phi + PI, Statistics::Boson).map_err(err)?;
        let f = hom_table(phi, Statistics::Fermion).map_err(err)?;
        let d = b.max_abs_diff(&f);
        ensure(d < 1e-12, || format!("φ={phi}: difference {d}"))?;
    }
    Ok(())
}

fn hom_closed_form() -> Check {
    for phi in phases(32) {
        for (stat, shift) in [(Statistics::Boson, 0.0), (Statistics::Fermion, PI)] {
            let t = hom_table(phi, stat).map_err(err)?;
            for (r, row) in closed_form::hom_table(phi + shift).iter().enumerate() {
                for (cond, want) in Condition::ALL.iter().zip(row) {
                    let got = t.get(r, *cond);
                    ensure((got - want).abs() < 1e-12, || format!("{stat} φ={phi} row {r}: {got} vs {want}"))?;
                }
            }
        }
    }
    Ok(())
}

fn which_way_flatness() -> Check {
    for phi in phases(16) {
        for stat in STATS {
            let t = hom_table_in_basis(phi, stat, PI / 2.0).map_err(err)?;
            for cond in [Condition::Up, Condition::Down] {
                for (got, want) in t.column(cond).iter().zip([0.25, 0.125, 0.125]) {
                    ensure((got - want).abs() < 1e-12, || format!("{stat} φ={phi} {cond}: {got}"))?;
                }
            }
        }
    }
    Ok(())
}

fn exchange_symmetry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inputs: Vec<Mode> = [Port::InputA, Port::InputB]
        .into_iter()
        .flat_map(|p| [Mode::new(p, Spin::Up), Mode::new(p, Spin::Down)])
        .collect();
    for _ in 0..100 {
        let (m1, m2) = (inputs[rng.gen_range(0..4)], inputs[rng.gen_range(0..4)]);
        let c = Complex::new(rng.gen::<f64>() + 0.1, rng.gen::<f64>());
        for stat in [Statistics::Boson, Statistics::Fermion] {
            let mut fwd = FockPolynomial::zero(stat);
            fwd.add_monomial(FockMonomial::new(vec![m1, m2], c));
            let mut rev = FockPolynomial::zero(stat);
            rev.add_monomial(FockMonomial::new(vec![m2, m1], c));
            let sign = if stat == Statistics::Fermion && m1 != m2 { -1.0 } else { 1.0 };
            let a = fwd.coefficient(&[m1, m2]);
            let b = rev.coefficient(&[m1, m2]);
            ensure((a - b * sign).norm() < 1e-12, || format!("{stat} {m1} {m2}: amplitudes {a} vs {b}"))?;
            if fwd.is_empty() {
                ensure(rev.is_empty(), || format!("{stat}: exclusion broken for {m1}"))?;
                continue;
            }
            let (fo, ro) = (beam_splitter_substitute(&fwd).map_err(err)?, beam_splitter_substitute(&rev).map_err(err)?);
            for ports in PortPattern::ALL {
                let p = DetectionPattern::ports(ports);
                let (x, y) = (event_probability(&fo, &p).map_err(err)?, event_probability(&ro, &p).map_err(err)?);
                ensure((x - y).abs() < 1e-12, || format!("{stat} {ports}: {x} vs {y}"))?;
            }
        }
    }
    Ok(())
}

fn chsh_closed_form() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..16 {
        let (ta, tb, phi) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let t = chsh_table(ta, tb, phi).map_err(err)?;
        for (r, row) in closed_form::chsh_table(ta - tb + phi).iter().enumerate() {
            for (cond, want) in Condition::ALL.iter().zip(row) {
                let got = t.get(r, *cond);
                ensure((got - want).abs() < 1e-12, || format!("({ta},{tb},{phi}) row {r}: {got} vs {want}"))?;
            }
        }
    }
    Ok(())
}

fn tsirelson_and_locality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..2.0 * PI));
        let s = ChshSettings::new(a[0], a[1], a[2], a[3]).map_err(err)?;
        let phi = rng.gen_range(-PI..PI);
        for cond in [Condition::Up, Condition::Down] {
            let v = crate::protocols::chsh_value(&s, phi, cond).map_err(err)?;
            ensure(v <= 2.0 * SQRT_2 + 1e-9, || format!("S = {v} above the Tsirelson bound"))?;
        }
        let m = crate::protocols::chsh_value(&s, phi, Condition::Unconditioned).map_err(err)?;
        ensure(m.abs() < 1e-12, || format!("unconditioned S = {m}"))?;
    }
    let e: f64 = chsh_correlator(0.4, 1.3, 0.2, Condition::Up).map_err(err)?;
    ensure((e - closed_form::chsh_correlator(0.4, 1.3, 0.2, 1.0)).abs() < 1e-12, || format!("correlator {e}"))
}

fn chsh_optimum() -> Check {
    for phi in [0.0, 0.7, PI / 3.0] {
        for cond in [Condition::Up, Condition::Down] {
            let s = optimal_chsh_angles(phi, cond).map_err(err)?;
            let v = crate::protocols::chsh_value(&s, phi, cond).map_err(err)?;
            ensure((v - 2.0 * SQRT_2).abs() < 1e-9, || format!("φ={phi} {cond}: S = {v}"))?;
        }
    }
    Ok(())
}

fn ghz_decomposition() -> Check {
    for n in 1..=12 {
        for phi in [0.0, PI / 3.0, 1.234] {
            let r = ghz_decomposition_residual(n, phi).map_err(err)?;
            ensure(r < 1e-12, || format!("n={n} φ={phi}: residual {r}"))?;
        }
    }
    Ok(())
}

fn fringe_identity() -> Check {
    for n in 1..=10 {
        for theta in phases(16) {
            let s = MetrologySetup::eraser(n, theta, 0.3).map_err(err)?;
            let want = closed_form::parity_fringe(n, theta, 0.3);
            let up = parity_expectation(&s, Condition::Up).map_err(err)?;
            let down = parity_expectation(&s, Condition::Down).map_err(err)?;
            let mixed = parity_expectation(&s, Condition::Unconditioned).map_err(err)?;
            ensure((up - want).abs() < 1e-10, || format!("n={n} θ={theta}: {up} vs {want}"))?;
            ensure((down + want).abs() < 1e-10, || format!("n={n} θ={theta}: C=down {down}"))?;
            ensure(mixed.abs() < 1e-12, || format!("n={n} θ={theta}: unconditioned {mixed}"))?;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let direct = parity_direct(&s, Condition::Up).map_err(err)?;
            ensure((up - sign * direct).abs() < 1e-12, || format!("n={n}: sandwich {up} vs direct {direct}"))?;
            let which_way = MetrologySetup::new(n, theta, 0.3, 0.0).map_err(err)?;
            for c in [Condition::Up, Condition::Down] {
                let v = parity_expectation(&which_way, c).map_err(err)?;
                ensure(v.abs() < 1e-12, || format!("n={n} θ={theta}: which-way {v}"))?;
            }
        }
    }
    Ok(())
}

fn parity_idempotence() -> Check {
    for n in 1..=8 {
        let s = MetrologySetup::eraser(n, 0.37 * n as f64, 0.5).map_err(err)?;
        let p2 = parity_square_expectation(&s, Condition::Up).map_err(err)?;
        ensure((p2 - 1.0).abs() < 1e-12, || format!("n={n}: ⟨P²⟩ = {p2}"))?;
    }
    Ok(())
}

fn sensitivity_saturation() -> Check {
    for n in 1..=10 {
        for theta in phases(16) {
            if (n as f64 * theta + 0.3).sin().abs() < 1e-3 {
                continue;
            }
            let s = MetrologySetup::eraser(n, theta, 0.3).map_err(err)?;
            match phase_sensitivity(&s).map_err(err)? {
                Sensitivity::Finite(v) => {
                    let x = v * (n * n) as f64;
                    ensure((x - 1.0).abs() < 1e-9, || format!("n={n} θ={theta}: n²·Var/slope² = {x}"))?;
                }
                Sensitivity::Divergent { slope } => return Err(format!("n={n} θ={theta}: unexpected stationary slope {slope}")),
            }
        }
    }
    Ok(())
}

fn sampler_determinism_and_join() -> Check {
    let c = ExperimentConfig::hom(0.4, Statistics::Fermion, 2000, 99);
    let a = run_experiment(&c).map_err(err)?;
    let b = run_experiment(&c).map_err(err)?;
    ensure(a == b, || "identical configs produced different streams".into())?;
    let j = delayed_join(&a.system, &a.control).map_err(err)?;
    ensure(j.up.len() + j.down.len() == a.system.len(), || "join lost shots".into())
}

type NamedCheck = (&'static str, fn() -> Check);

const CHECKS: &[NamedCheck] = &[
    ("norm preservation under random unitaries", norm_preservation),
    ("Born weights of both outcomes sum to one", born_consistency),
    ("relative-state decomposition of the three-spin state", relative_state_identity),
    ("control-traced state is the zero-discord mixture", zero_discord_mixture),
    ("sigma_theta spectrum is ±1", sigma_theta_spectrum),
    ("three-spin state is locally equivalent to GHZ", local_unitary_equivalence),
    ("HOM detection patterns exhaust probability", fock_unitarity),
    ("HOM control marginal is flat", marginal_flatness),
    ("fermion table is boson table shifted by π", boson_fermion_duality),
    ("HOM tables match the closed form", hom_closed_form),
    ("which-way control basis gives flat conditioned columns", which_way_flatness),
    ("exchange symmetry of two-particle monomials", exchange_symmetry),
    ("CHSH tables match the closed form", chsh_closed_form),
    ("Tsirelson bound and unconditioned locality", tsirelson_and_locality),
    ("optimized CHSH settings reach 2√2", chsh_optimum),
    ("GHZ decomposition residual", ghz_decomposition),
    ("parity fringes, erasure and which-way loss", fringe_identity),
    ("parity squares to one", parity_idempotence),
    ("phase sensitivity at the Heisenberg limit", sensitivity_saturation),
    ("sampler determinism and join completeness", sampler_determinism_and_join),
];

/// Runs every check in order.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok(()) => CheckOutcome { name, passed: true, detail: String::new() },
            Err(detail) => CheckOutcome { name, passed: false, detail },
        })
        .collect()
}
