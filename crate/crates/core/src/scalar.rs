use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type used by the numerical modules (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; exact for `f64`.
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 converts to every Real")
    }

    fn from_usize_lossy(x: usize) -> Self {
        <Self as FromPrimitive>::from_usize(x).expect("usize converts to every Real")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `exp(2 pi i * num / den)`, reducing the fraction first so that exact
/// roots such as `-1` and `i` come out without rounding in the angle.
pub fn root_of_unity<T: Real>(num: usize, den: usize) -> Complex<T> {
    let r = num % den;
    if r == 0 {
        return Complex::new(T::one(), T::zero());
    }
    if 2 * r == den {
        return Complex::new(-T::one(), T::zero());
    }
    if 4 * r == den {
        return Complex::new(T::zero(), T::one());
    }
    if 4 * r == 3 * den {
        return Complex::new(T::zero(), -T::one());
    }
    let angle = T::TAU() * T::from_usize_lossy(r) / T::from_usize_lossy(den);
    Complex::from_polar(T::one(), angle)
}
