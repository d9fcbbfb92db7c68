//! Scalar abstraction shared by every numerical module.
//!
//! All physics is written against [`Real`], implemented for `f32` and `f64`.
//! `f64` is the validated precision: the tolerances quoted throughout the
//! crate (1e-9 contrast floors, 1e-12 unitarity) assume double precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

// Angle conversions live here and nowhere else.

#[inline]
pub fn deg_to_rad<T: Real>(deg: T) -> T {
    deg * T::PI() / T::lit(180.0)
}

#[inline]
pub fn rad_to_deg<T: Real>(rad: T) -> T {
    rad * T::lit(180.0) / T::PI()
}

/// Wraps an angle in degrees into (-180, 180].
pub fn wrap_deg<T: Real>(deg: T) -> T {
    let full = T::lit(360.0);
    let half = T::lit(180.0);
    let mut w = deg % full;
    if w > half {
        w -= full;
    } else if w <= -half {
        w += full;
    }
    w
}

/// Principal argument of `c` in degrees, in (-180, 180].
#[inline]
pub fn arg_deg<T: Real>(c: Complex<T>) -> T {
    rad_to_deg(c.im.atan2(c.re))
}

/// Signed phase step from `from` to `to`, in degrees, on the nearest branch.
#[inline]
pub fn phase_step_deg<T: Real>(from: Complex<T>, to: Complex<T>) -> T {
    arg_deg(to * from.conj())
}

/// `1/sqrt(2)`, the `q` scale factor of the labelled parameter points.
#[inline]
pub fn q<T: Real>() -> T {
    T::FRAC_1_SQRT_2()
}
