//! Scalar abstraction: all approximate numerics are generic over [`Real`].

use num_traits::{FromPrimitive, ToPrimitive};

pub use num_complex::Complex;

/// Floating-point scalar used by the simulator (`f32`, `f64`).
///
/// `RealField` supplies the transcendental functions and makes
/// `Complex<T>` usable inside `nalgebra` matrices; the num-traits bounds
/// cover conversions to/from literals and counters.
pub trait Real: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy + std::iter::Sum {}

impl<T> Real for T where T: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy + std::iter::Sum {}

/// Converts an `f64` constant into the working scalar.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable")
}

/// Converts a count into the working scalar.
#[inline]
pub fn real_of_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count must be representable")
}

/// `e^{i theta}` without requiring `num_traits::Float` on `T`.
#[inline]
pub fn unit_phase<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Squared magnitude of a complex amplitude.
#[inline]
pub fn norm_sqr<T: Real>(z: &Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// Magnitude of a complex amplitude.
#[inline]
pub fn modulus<T: Real>(z: &Complex<T>) -> T {
    norm_sqr(z).sqrt()
}
