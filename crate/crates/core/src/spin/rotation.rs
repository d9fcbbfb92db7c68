//! SU(2) rotations stored as unit quaternions.
//!
//! The quaternion `(w, x, y, z)` stands for the 2x2 matrix
//!
//! ```text
//!   U = w·I − i(x·σx + y·σy + z·σz)
//! ```
//!
//! so a rotation by θ about n̂ is `(cos θ/2, sin θ/2 · n̂)`, i.e.
//! `exp(−i θ/2 n̂·σ)`. Under this map the Hamilton product is the matrix
//! product. `q` and `−q` are different elements: a 360° precession is `−I`.

use std::ops::Mul;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{deg_to_rad, rad_to_deg, Real};

/// 2x2 complex matrix in row-major order.
pub type Su2Matrix<T> = [[Complex<T>; 2]; 2];

/// An element of SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<T> {
    w: T,
    x: T,
    y: T,
    z: T,
}

impl<T: Real> Rotation<T> {
    pub fn identity() -> Self {
        Self { w: T::one(), x: T::zero(), y: T::zero(), z: T::zero() }
    }

    /// Builds a rotation from raw quaternion components, normalizing them.
    pub fn from_quaternion(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }.normalized()
    }

    /// `exp(−i θ/2 n̂·σ)` with θ in degrees. The axis is normalized here;
    /// a zero axis is only accepted for a zero angle.
    pub fn from_axis_angle(axis: [T; 3], angle_deg: T) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if angle_deg == T::zero() {
            return Ok(Self::identity());
        }
        if !(norm > T::zero()) || !norm.is_finite() || !angle_deg.is_finite() {
            return Err(Error::UndefinedAxis);
        }
        let half = deg_to_rad(angle_deg) / T::lit(2.0);
        let s = half.sin() / norm;
        Ok(Self { w: half.cos(), x: s * axis[0], y: s * axis[1], z: s * axis[2] })
    }

    /// Rotation about ẑ by `angle_deg`.
    pub fn about_z(angle_deg: T) -> Self {
        let half = deg_to_rad(angle_deg) / T::lit(2.0);
        Self { w: half.cos(), x: T::zero(), y: T::zero(), z: half.sin() }
    }

    pub fn components(&self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(&self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    fn normalized(self) -> Self {
        let n = self.norm();
        Self { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    /// Operator product `second · first`: `first` acts on the state before `second`.
    pub fn compose(second: &Self, first: &Self) -> Self {
        let (a0, a1, a2, a3) = (second.w, second.x, second.y, second.z);
        let (b0, b1, b2, b3) = (first.w, first.x, first.y, first.z);
        Self {
            w: a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            x: a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            y: a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            z: a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Axis and angle with the angle in [0, 360]. At 0 and 360 the axis is ẑ.
    pub fn axis_angle(&self) -> ([T; 3], T) {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        let angle = T::lit(2.0) * rad_to_deg(v.atan2(self.w));
        let tiny = T::epsilon() * T::lit(4.0);
        if v <= tiny {
            let angle = if self.w > T::zero() { T::zero() } else { T::lit(360.0) };
            return ([T::zero(), T::zero(), T::one()], angle);
        }
        ([self.x / v, self.y / v, self.z / v], angle)
    }

    /// The 2x2 matrix `w·I − i(v·σ)`.
    pub fn matrix(&self) -> Su2Matrix<T> {
        let c = Complex::new;
        [
            [c(self.w, -self.z), c(-self.y, -self.x)],
            [c(self.y, -self.x), c(self.w, self.z)],
        ]
    }

    /// Max componentwise distance to `other` (sign-sensitive).
    pub fn distance(&self, other: &Self) -> T {
        let a = self.components();
        let b = other.components();
        (0..4).fold(T::zero(), |m, i| m.max((a[i] - b[i]).abs()))
    }
}

impl<T: Real> Mul for Rotation<T> {
    type Output = Self;

    /// `a * b` is `compose(a, b)`.
    fn mul(self, rhs: Self) -> Self {
        Self::compose(&self, &rhs)
    }
}

impl<T: Real> Default for Rotation<T> {
    fn default() -> Self {
        Self::identity()
    }
}
