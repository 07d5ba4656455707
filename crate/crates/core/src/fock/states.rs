use num_complex::Complex;

use super::mode::{Mode, Port, Spin, Statistics};
use super::polynomial::{FockMonomial, FockPolynomial};
use crate::qubit::Sign;
use crate::scalar::{cis, frac_1_sqrt_2, real, Real};

const A_UP: Mode = Mode::new(Port::InputA, Spin::Up);
const A_DOWN: Mode = Mode::new(Port::InputA, Spin::Down);
const B_UP: Mode = Mode::new(Port::InputB, Spin::Up);
const B_DOWN: Mode = Mode::new(Port::InputB, Spin::Down);

/// `(a†↑ b†↓ c†→ + e^{iφ} a†↓ b†↑ c†←)/√2` with `c†→/← = (c†↑ ± c†↓)/√2`.
pub fn hom_input_state<T: Real>(phi: T, statistics: Statistics) -> FockPolynomial<T> {
    let h = frac_1_sqrt_2::<T>();
    let c_up = Mode::new(Port::Control, Spin::Up);
    let c_down = Mode::new(Port::Control, Spin::Down);
    let right = FockPolynomial::linear(statistics, &[(c_up, real(h)), (c_down, real(h))]);
    let left = FockPolynomial::linear(statistics, &[(c_up, real(h)), (c_down, real(-h))]);
    let first = pair(statistics, A_UP, B_DOWN).mul(&right).expect("same statistics");
    let second = pair(statistics, A_DOWN, B_UP).mul(&left).expect("same statistics");
    first
        .scale(real(h))
        .add(&second.scale(cis(phi) * h))
        .expect("same statistics")
}

/// Two-particle relative state `(a†↑ b†↓ ± e^{iφ} a†↓ b†↑)/√2`.
pub fn hom_pair_state<T: Real>(phi: T, sign: Sign, statistics: Statistics) -> FockPolynomial<T> {
    let h = frac_1_sqrt_2::<T>();
    pair(statistics, A_UP, B_DOWN)
        .scale(real(h))
        .add(&pair(statistics, A_DOWN, B_UP).scale(cis(phi) * (h * sign.value::<T>())))
        .expect("same statistics")
}

fn pair<T: Real>(statistics: Statistics, first: Mode, second: Mode) -> FockPolynomial<T> {
    let mut p = FockPolynomial::zero(statistics);
    p.add_monomial(FockMonomial::new(vec![first, second], Complex::new(T::one(), T::zero())));
    p
}
