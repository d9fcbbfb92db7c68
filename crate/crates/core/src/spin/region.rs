use crate::error::Result;
use crate::scalar::Real;
use crate::spin::rotation::Rotation;

/// One piecewise-constant field region: precession by `angle_deg` about `axis`.
///
/// Unlike [`Rotation`], the angle is not reduced, so a region can describe a
/// precession of several turns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T> {
    pub axis: [T; 3],
    pub angle_deg: T,
}

impl<T: Real> Region<T> {
    pub fn new(axis: [T; 3], angle_deg: T) -> Self {
        Self { axis, angle_deg }
    }

    /// Unit axis; ẑ for a zero-angle region with a zero axis.
    pub fn unit_axis(&self) -> [T; 3] {
        let [x, y, z] = self.axis;
        let n = (x * x + y * y + z * z).sqrt();
        if n > T::zero() {
            [x / n, y / n, z / n]
        } else {
            [T::zero(), T::zero(), T::one()]
        }
    }

    pub fn rotation(&self) -> Result<Rotation<T>> {
        Rotation::from_axis_angle(self.axis, self.angle_deg)
    }

    /// The same axis with a fraction of the angle.
    pub fn partial(&self, fraction: T) -> Self {
        Self { axis: self.axis, angle_deg: self.angle_deg * fraction }
    }

    pub fn inverse(&self) -> Self {
        Self { axis: self.axis, angle_deg: -self.angle_deg }
    }
}

/// Net rotation of regions traversed in order (first element first).
pub fn compose_regions<T: Real>(regions: &[Region<T>]) -> Result<Rotation<T>> {
    regions
        .iter()
        .try_fold(Rotation::identity(), |acc, r| Ok(Rotation::compose(&r.rotation()?, &acc)))
}
