use crate::apparatus::ParameterPoint;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_STEPS_PER_SEGMENT: usize = 100;

/// A polyline in the (b1y, b2y) plane. A closed path has an implicit
/// segment from the last vertex back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPath<T> {
    vertices: Vec<ParameterPoint<T>>,
    steps_per_segment: usize,
    closed: bool,
}

impl<T: Real> ParameterPath<T> {
    pub fn new(vertices: Vec<ParameterPoint<T>>, steps_per_segment: usize, closed: bool) -> Result<Self> {
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(Error::InvalidPath(format!(
                "{} path needs at least {min} vertices, got {}",
                if closed { "closed" } else { "open" },
                vertices.len()
            )));
        }
        if steps_per_segment == 0 {
            return Err(Error::InvalidPath("steps_per_segment must be positive".into()));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPath(format!("non-finite vertex {p:?}")));
        }
        let path = Self { vertices, steps_per_segment, closed };
        if let Some(i) = path.segments().position(|(a, b)| a == b) {
            return Err(Error::InvalidPath(format!("segment {i} has coincident endpoints")));
        }
        Ok(path)
    }

    pub fn open(vertices: Vec<ParameterPoint<T>>) -> Result<Self> {
        Self::new(vertices, DEFAULT_STEPS_PER_SEGMENT, false)
    }

    pub fn closed(vertices: Vec<ParameterPoint<T>>) -> Result<Self> {
        Self::new(vertices, DEFAULT_STEPS_PER_SEGMENT, true)
    }

    /// Counterclockwise boundary of an axis-aligned rectangle, starting at
    /// its lower-left corner.
    pub fn rectangle(b1_min: T, b1_max: T, b2_min: T, b2_max: T, steps_per_segment: usize) -> Result<Self> {
        if !(b1_min < b1_max && b2_min < b2_max) {
            return Err(Error::InvalidPath("degenerate rectangle".into()));
        }
        Self::new(
            vec![
                ParameterPoint::new(b1_min, b2_min),
                ParameterPoint::new(b1_max, b2_min),
                ParameterPoint::new(b1_max, b2_max),
                ParameterPoint::new(b1_min, b2_max),
            ],
            steps_per_segment,
            true,
        )
    }

    /// Counterclockwise square around `center`.
    pub fn square(center: ParameterPoint<T>, half_width: T, steps_per_segment: usize) -> Result<Self> {
        Self::rectangle(
            center.b1y - half_width,
            center.b1y + half_width,
            center.b2y - half_width,
            center.b2y + half_width,
            steps_per_segment,
        )
    }

    pub fn vertices(&self) -> &[ParameterPoint<T>] {
        &self.vertices
    }

    pub fn steps_per_segment(&self) -> usize {
        self.steps_per_segment
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn with_steps(&self, steps_per_segment: usize) -> Result<Self> {
        Self::new(self.vertices.clone(), steps_per_segment, self.closed)
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        if self.closed {
            // Keep the starting vertex so the loop is the same point set.
            vertices[1..].reverse();
        } else {
            vertices.reverse();
        }
        Self { vertices, steps_per_segment: self.steps_per_segment, closed: self.closed }
    }

    /// Segments in traversal order, including the closing one.
    pub fn segments(&self) -> impl Iterator<Item = (ParameterPoint<T>, ParameterPoint<T>)> + '_ {
        let n = self.vertices.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn length(&self) -> T {
        self.segments().map(|(a, b)| a.distance(&b)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> ParameterPoint<f64> {
        ParameterPoint::new(a, b)
    }

    #[test]
    fn validation() {
        assert!(ParameterPath::open(vec![p(0.0, 0.0)]).is_err());
        assert!(ParameterPath::closed(vec![p(0.0, 0.0), p(1.0, 0.0)]).is_err());
        assert!(ParameterPath::open(vec![p(0.0, 0.0), p(0.0, 0.0)]).is_err());
        assert!(ParameterPath::closed(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0)]).is_err());
        assert!(ParameterPath::new(vec![p(0.0, 0.0), p(1.0, 0.0)], 0, false).is_err());
        assert!(ParameterPath::open(vec![p(0.0, 0.0), p(f64::NAN, 0.0)]).is_err());
        assert!(ParameterPath::open(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0)]).is_ok());
    }

    #[test]
    fn rectangle_is_counterclockwise() {
        let r = ParameterPath::rectangle(0.0, 2.0, 0.0, 1.0, 10).unwrap();
        // Shoelace area is positive for counterclockwise order.
        let area: f64 = r.segments().map(|(a, b)| a.b1y * b.b2y - b.b1y * a.b2y).sum::<f64>() / 2.0;
        assert_eq!(area, 2.0);
        assert_eq!(r.length(), 6.0);
        let back: f64 = r.reversed().segments().map(|(a, b)| a.b1y * b.b2y - b.b1y * a.b2y).sum::<f64>() / 2.0;
        assert_eq!(back, -2.0);
    }
}
