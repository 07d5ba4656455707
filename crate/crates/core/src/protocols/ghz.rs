use crate::error::{Error, Result};
use crate::qubit::{ghz_state, StateVector};
use crate::scalar::{frac_1_sqrt_2, real, Real};

/// Norm of `|GHZ_φ⟩_{n+1} − (|GHZ_φ⟩_n|→⟩ + |GHZ_{φ+π}⟩_n|←⟩)/√2`.
pub fn ghz_decomposition_residual<T: Real>(n: usize, phi: T) -> Result<T> {
    if !(1..=19).contains(&n) {
        return Err(Error::Argument(format!("decomposition check needs 1 ≤ n ≤ 19, got {n}")));
    }
    let first = ghz_state(n, phi)?.tensor(&StateVector::right())?;
    let second = ghz_state(n, phi + T::PI())?.tensor(&StateVector::left())?;
    let h = real(frac_1_sqrt_2::<T>());
    let rhs = StateVector::superpose(&[(h, &first), (h, &second)])?;
    ghz_state(n + 1, phi)?.distance(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn residual_vanishes() {
        for (n, phi) in [(2, 0.0), (1, PI / 3.0), (10, 1.234)] {
            assert!(ghz_decomposition_residual(n, phi).unwrap() < 1e-12);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(ghz_decomposition_residual::<f64>(0, 0.0).is_err());
        assert!(ghz_decomposition_residual::<f64>(20, 0.0).is_err());
    }
}
