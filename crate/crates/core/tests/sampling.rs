use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use delayed_choice::fock::Statistics;
use delayed_choice::protocols::{closed_form, hom_table, optimal_chsh_angles, Condition, MetrologySetup};
use delayed_choice::protocols::{chsh_value, parity_expectation, ChshSettings};
use delayed_choice::sampler::{
    chi_square_homogeneity, delayed_join, parity_by_theta, run_experiment, system_counts, ExperimentConfig,
    SamplingMode,
};

const SHOTS: u64 = 100_000;

fn joined(config: &ExperimentConfig) -> delayed_choice::sampler::JoinedData {
    let s = run_experiment(config).unwrap();
    delayed_join(&s.system, &s.control).unwrap()
}

#[test]
fn control_basis_does_not_signal_to_the_system() {
    let settings = optimal_chsh_angles(0.3, Condition::Up).unwrap();
    let cases = [
        ExperimentConfig::hom(0.8, Statistics::Boson, SHOTS, 1),
        ExperimentConfig::chsh(0.3, settings, SHOTS, 1),
        ExperimentConfig::metrology(3, 0.5, vec![0.2, 1.1], SHOTS, 1),
    ];
    for base in cases {
        let reference = system_counts(&run_experiment(&base).unwrap().system);
        for (k, angle) in [0.4, 1.3, FRAC_PI_2 + 0.2].into_iter().enumerate() {
            let other = ExperimentConfig { seed: 50 + k as u64, ..base.clone() }.with_control_angle(angle);
            let test = chi_square_homogeneity(&reference, &system_counts(&run_experiment(&other).unwrap().system)).unwrap();
            assert!(test.p_value > 0.001, "{} at control angle {angle}: p = {}", base.kind, test.p_value);
        }
    }
}

#[test]
fn which_way_metrology_shows_no_fringe() {
    let thetas = vec![0.0, 0.4, 1.2];
    let config = ExperimentConfig::metrology(2, 0.3, thetas.clone(), SHOTS, 9).with_control_angle(0.0);
    let data = joined(&config);
    for cond in [Some(delayed_choice::qubit::Outcome::Plus), Some(delayed_choice::qubit::Outcome::Minus), None] {
        for (_, est) in parity_by_theta(data.set(cond)).unwrap() {
            assert!(est.mean.abs() < 5.0 / (est.count as f64).sqrt(), "{cond:?}: {}", est.mean);
        }
    }
}

#[test]
fn eraser_metrology_recovers_the_fringe_and_unjoined_is_flat() {
    let thetas: Vec<f64> = (0..4).map(|k| 0.3 * k as f64).collect();
    let data = joined(&ExperimentConfig::metrology(3, 0.0, thetas, SHOTS, 4));
    for (theta, est) in parity_by_theta(&data.up).unwrap() {
        let want = closed_form::parity_fringe(3, theta, 0.0);
        assert!((est.mean - want).abs() < 5.0 * est.sigma.max(1e-3), "θ={theta}: {} vs {want}", est.mean);
    }
    for (_, est) in parity_by_theta(&data.unjoined).unwrap() {
        assert!(est.mean.abs() < 5.0 / (est.count as f64).sqrt());
    }
}

#[test]
fn classical_mixture_reproduces_the_joined_fringe() {
    let config = ExperimentConfig::metrology(2, 0.0, vec![0.2, 0.9], SHOTS, 3).with_mode(SamplingMode::ClassicalMixture);
    let data = joined(&config);
    for (theta, est) in parity_by_theta(&data.up).unwrap() {
        let want = closed_form::parity_fringe(2, theta, 0.0);
        assert!((est.mean - want).abs() < 5.0 * est.sigma.max(1e-3));
    }
}

#[test]
fn chsh_grid_oracle_finds_the_tsirelson_value() {
    // Correlators depend only on a − b; tabulate them on the grid and search exhaustively.
    const STEPS: usize = 512;
    let step = 2.0 * PI / STEPS as f64;
    // φ = 0 puts the optimum on the grid; otherwise the grid misses it by O(step²).
    for (phi, tol) in [(0.0, 1e-9), (PI / 4.0, 1e-9), (0.7, 1e-5)] {
        let e: Vec<f64> = (0..STEPS).map(|d| (d as f64 * step + phi).cos()).collect();
        let at = |a: usize, b: usize| e[(a + STEPS - b) % STEPS];
        let mut best = (0.0, 0, 0, 0);
        for a1 in 0..STEPS {
            for b0 in 0..STEPS {
                for b1 in 0..STEPS {
                    let s = (at(0, b0) + at(0, b1) + at(a1, b0) - at(a1, b1)).abs();
                    if s > best.0 {
                        best = (s, a1, b0, b1);
                    }
                }
            }
        }
        assert!((best.0 - 2.0 * SQRT_2).abs() < tol, "grid maximum {} at φ={phi}", best.0);
        let grid = ChshSettings::new(0.0, best.1 as f64 * step, best.2 as f64 * step, best.3 as f64 * step).unwrap();
        assert!((chsh_value(&grid, phi, Condition::Up).unwrap() - best.0).abs() < 1e-12);
        let found = optimal_chsh_angles(phi, Condition::Up).unwrap();
        assert!(chsh_value(&found, phi, Condition::Up).unwrap() >= best.0 - 1e-9);
    }
}

#[test]
fn single_precision_instantiation_agrees() {
    let phi = 0.7f32;
    let t32 = hom_table(phi, Statistics::Fermion).unwrap();
    let t64 = hom_table(phi as f64, Statistics::Fermion).unwrap();
    for r in 0..3 {
        for cond in Condition::ALL {
            assert!((t32.get(r, cond) as f64 - t64.get(r, cond)).abs() < 1e-5);
        }
    }
    let setup = MetrologySetup::<f32>::eraser(4, 0.3, 0.2).unwrap();
    let p = parity_expectation(&setup, Condition::Up).unwrap();
    assert!((p - closed_form::parity_fringe(4, 0.3f32, 0.2)).abs() < 1e-5);
}
