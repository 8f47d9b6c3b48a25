//! Scalar abstraction: the solvers are generic over the floating point type.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the library is generic over: f32 or f64.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static
{
}

/// Convert an f64 literal (tolerances, constants) into the working scalar.
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

pub(crate) fn cplx<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Real number as a complex value.
pub(crate) fn creal<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Purely imaginary value.
pub(crate) fn cimag<T: Scalar>(im: T) -> Complex<T> {
    Complex::new(T::zero(), im)
}

/// e^{i phi}
pub(crate) fn phase<T: Scalar>(phi: T) -> Complex<T> {
    Complex::from_polar(T::one(), phi)
}
