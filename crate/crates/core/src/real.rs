//! Scalar abstraction shared by the generic numeric modules.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar usable by the generic numeric code.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from an integer.
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }

    /// Lossy conversion to `f64`.
    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Machine epsilon as a plain value.
    #[inline]
    fn eps() -> Self {
        Self::epsilon()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand constructor for complex values.
#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Complex value from a real.
#[inline]
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `e(x) = exp(2 i pi x)` for real `x`.
#[inline]
pub fn e2pi<T: Real>(x: T) -> Complex<T> {
    let a = T::TAU() * x;
    Complex::new(a.cos(), a.sin())
}

/// `exp(2 i pi a / m)` for integers, reduced modulo `m` before the float conversion.
#[inline]
pub fn root_of_unity<T: Real>(a: i64, m: i64) -> Complex<T> {
    let m = m.abs().max(1);
    let r = a.rem_euclid(m);
    let t = T::int(r) / T::int(m);
    e2pi(t)
}

/// Positive real base raised to a complex power, principal branch.
#[inline]
pub fn rpow<T: Real>(base: T, e: Complex<T>) -> Complex<T> {
    (e * base.ln()).exp()
}
