//! Reference closed forms. Used only to check the derived pipelines.

use crate::scalar::Real;

/// HOM rows (AB, AA, BB) × (C=up, C=down, C=?) at effective phase `phi_prime`.
pub fn hom_table<T: Real>(phi_prime: T) -> [[T; 3]; 3] {
    let s2 = (phi_prime * T::half()).sin().powi(2);
    let c2 = (phi_prime * T::half()).cos().powi(2);
    let q = T::lit(0.25);
    [
        [T::half() * s2, T::half() * c2, T::half()],
        [q * c2, q * s2, q],
        [q * c2, q * s2, q],
    ]
}

/// CHSH rows (↓↓, ↓↑, ↑↓, ↑↑) × (C=up, C=down, C=?) at `phi_prime = θ_A − θ_B + φ`.
pub fn chsh_table<T: Real>(phi_prime: T) -> [[T; 3]; 4] {
    let q = T::lit(0.25);
    let s2 = q * (phi_prime * T::half()).sin().powi(2);
    let c2 = q * (phi_prime * T::half()).cos().powi(2);
    [[c2, s2, q], [s2, c2, q], [s2, c2, q], [c2, s2, q]]
}

/// Conditional correlator `±cos(θ_A − θ_B + φ)` (`sign` = +1 for C=up).
pub fn chsh_correlator<T: Real>(theta_a: T, theta_b: T, phi: T, sign: T) -> T {
    sign * (theta_a - theta_b + phi).cos()
}

/// Parity fringe `(−1)^n cos(nθ + φ)` of the conditioned GHZ_φ branch.
pub fn parity_fringe<T: Real>(n: usize, theta: T, phi: T) -> T {
    let sign = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    sign * (T::from_usize(n).expect("small n") * theta + phi).cos()
}

/// Heisenberg limit `1/n²`.
pub fn heisenberg_limit<T: Real>(n: usize) -> T {
    let n = T::from_usize(n).expect("small n");
    T::one() / (n * n)
}
