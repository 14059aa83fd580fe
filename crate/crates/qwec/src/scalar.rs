//! Scalar abstraction so the engine runs on `f32` or `f64`.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumCast};
use std::fmt::{Debug, Display, LowerExp};

/// Real scalar used for amplitudes.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumCast + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossy conversion from a literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal fits the scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        NumCast::from(self).unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumCast + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
}

pub type C<T> = Complex<T>;

pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// i^k for k taken mod 4.
pub fn ipow<T: Real>(k: u8) -> C<T> {
    match k & 3 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// e^{i theta}
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}
