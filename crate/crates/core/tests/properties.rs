use std::f64::consts::{PI, SQRT_2};

use delayed_choice::fock::{FockPolynomial, Mode, Port, Spin, Statistics};
use delayed_choice::protocols::closed_form;
use delayed_choice::protocols::{chsh_value, hom_table, ChshSettings, Condition};
use delayed_choice::qubit::{Outcome, SingleQubitOperator, StateVector};
use num_complex::Complex;
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    -2.0 * PI..2.0 * PI
}

fn random_state(n: usize) -> impl Strategy<Value = StateVector<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("zero vector", move |raw| {
        let norm: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| {
            let amps = raw.iter().map(|(a, b)| Complex::new(a / norm, b / norm)).collect();
            StateVector::from_amplitudes(n, amps).unwrap()
        })
    })
}

fn random_unitary() -> impl Strategy<Value = SingleQubitOperator<f64>> {
    (angle(), angle(), angle()).prop_map(|(a, b, c)| {
        let z = |t: f64| SingleQubitOperator::phase_z(t);
        let y = SingleQubitOperator::rotation_y(b);
        let mut m = [[Complex::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..2 {
                    for l in 0..2 {
                        *cell += z(a).get(i, k) * y.get(k, l) * z(c).get(l, j);
                    }
                }
            }
        }
        SingleQubitOperator::new(m)
    })
}

fn mode() -> impl Strategy<Value = Mode> {
    (0..Mode::COUNT).prop_map(Mode::from_index)
}

proptest! {
    #[test]
    fn local_unitaries_preserve_the_norm(s in random_state(3), u in random_unitary(), q in 0usize..3) {
        let image = s.apply_single_qubit(q, &u).unwrap();
        prop_assert!((image.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branch_weights_sum_to_one_and_match_projection(s in random_state(3), theta in angle(), q in 0usize..3) {
        let basis = SingleQubitOperator::sigma_theta(theta);
        let plus = s.outcome_probability(q, &basis, Outcome::Plus).unwrap();
        let minus = s.outcome_probability(q, &basis, Outcome::Minus).unwrap();
        prop_assert!((plus + minus - 1.0).abs() < 1e-12);
        let mut ops = vec![SingleQubitOperator::identity(); 3];
        ops[q] = basis;
        let mean = s.expectation(&ops).unwrap();
        prop_assert!((plus - minus - mean).abs() < 1e-12);
        if let Some((w, branch)) = s.project_qubit(q, &SingleQubitOperator::sigma_theta(theta), Outcome::Plus).unwrap() {
            prop_assert!((w - plus).abs() < 1e-12);
            prop_assert!((branch.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fermionic_creation_operators_anticommute(x in mode(), y in mode()) {
        let f = |m| FockPolynomial::<f64>::creation(Statistics::Fermion, m);
        let sum = f(x).mul(&f(y)).unwrap().add(&f(y).mul(&f(x)).unwrap()).unwrap();
        prop_assert!(sum.norm_sqr() < 1e-24);
        let b = |m| FockPolynomial::<f64>::creation(Statistics::Boson, m);
        let diff = b(x).mul(&b(y)).unwrap().add(&b(y).mul(&b(x)).unwrap().scale(Complex::new(-1.0, 0.0))).unwrap();
        prop_assert!(diff.norm_sqr() < 1e-24);
    }

    #[test]
    fn fermions_track_bosons_shifted_by_pi(phi in angle()) {
        let b = hom_table(phi + PI, Statistics::Boson).unwrap();
        let f = hom_table(phi, Statistics::Fermion).unwrap();
        prop_assert!(b.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn tables_are_probability_tables(phi in angle()) {
        for stat in [Statistics::Boson, Statistics::Fermion, Statistics::Distinguishable] {
            prop_assert!(hom_table(phi, stat).unwrap().check_invariants(1e-12).is_ok());
        }
    }

    #[test]
    fn tsirelson_bound_holds(a0 in angle(), a1 in angle(), b0 in angle(), b1 in angle(), phi in angle()) {
        let s = ChshSettings::new(a0, a1, b0, b1).unwrap();
        for cond in [Condition::Up, Condition::Down] {
            prop_assert!(chsh_value(&s, phi, cond).unwrap() <= 2.0 * SQRT_2 + 1e-12);
        }
        prop_assert!(chsh_value(&s, phi, Condition::Unconditioned).unwrap() < 1e-12);
    }

    #[test]
    fn parity_fringe_closed_form_is_bounded(n in 1usize..12, theta in angle(), phi in angle()) {
        prop_assert!(closed_form::parity_fringe(n, theta, phi).abs() <= 1.0);
    }
}

#[test]
fn doubly_occupied_fermion_modes_vanish() {
    for i in 0..Mode::COUNT {
        let m = Mode::from_index(i);
        let a = FockPolynomial::<f64>::creation(Statistics::Fermion, m);
        assert!(a.mul(&a).unwrap().is_empty());
    }
    let m = Mode::new(Port::OutputA, Spin::Up);
    let a = FockPolynomial::<f64>::creation(Statistics::Boson, m);
    assert!((a.mul(&a).unwrap().norm_sqr() - 2.0).abs() < 1e-12);
}
