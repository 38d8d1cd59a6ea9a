//! Real scalar abstraction. All complex arithmetic in the crate is carried
//! out over `Complex<R>` for a real field `R` implementing [`Scalar`].

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real field the numerics are generic over; implemented for `f32` and `f64`.
pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, used for reporting.
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand constructor for a complex scalar.
pub fn c<R: Scalar>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::lit(re), R::lit(im))
}

/// Embeds a real scalar.
pub fn re<R: Scalar>(x: R) -> Complex<R> {
    Complex::new(x, R::zero())
}

/// The imaginary unit.
pub fn i_unit<R: Scalar>() -> Complex<R> {
    Complex::new(R::zero(), R::one())
}

pub(crate) fn is_finite<R: Scalar>(z: &Complex<R>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
