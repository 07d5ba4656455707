//! Scalar abstraction shared by the engine, the operator algebra and the protocols.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar the simulation is generic over (`f32` or `f64`).
///
/// The associated tolerances scale with the precision of the type, so the
/// same invariant checks run unchanged in single and double precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for analytic identities (unit norm, Hermiticity, unit trace).
    const IDENTITY_TOL: Self;
    /// Lower bound accepted for density-matrix eigenvalues.
    const EIGEN_TOL: Self;
    /// Branch probabilities below this are never selected by a measurement.
    const BRANCH_TOL: Self;
    /// Central finite-difference step used to cross-check analytic slopes.
    const FD_STEP: Self;
    /// Relative agreement required between analytic and finite-difference slopes.
    const FD_REL_TOL: Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Real for f64 {
    const IDENTITY_TOL: Self = 1e-12;
    const EIGEN_TOL: Self = 1e-10;
    const BRANCH_TOL: Self = 1e-14;
    const FD_STEP: Self = 1e-6;
    const FD_REL_TOL: Self = 1e-6;
}

impl Real for f32 {
    const IDENTITY_TOL: Self = 1e-5;
    const EIGEN_TOL: Self = 1e-4;
    const BRANCH_TOL: Self = 1e-7;
    const FD_STEP: Self = 1e-2;
    const FD_REL_TOL: Self = 2e-2;
}

/// `e^{i angle}`.
#[inline]
pub fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::new(angle.cos(), angle.sin())
}

#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn frac_1_sqrt_2<T: Real>() -> T {
    T::FRAC_1_SQRT_2()
}
