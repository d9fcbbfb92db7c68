//! Nearest-branch phase continuation of a complex function of one real
//! parameter, with recursive bisection of steps that are too coarse.

use num_complex::Complex;

use crate::scalar::{phase_step_deg, Real};
use crate::spin::SINGULAR_CONTRAST;

/// Bisection policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement<T> {
    /// A step whose phase change reaches this is bisected.
    pub jump_limit_deg: T,
    /// Steps touching a sample with lower contrast use the tighter limit below.
    pub contrast_floor: T,
    pub low_contrast_jump_deg: T,
    pub max_depth: u32,
    /// Any sample below this contrast aborts the continuation.
    pub singular_contrast: T,
}

impl<T: Real> Default for Refinement<T> {
    fn default() -> Self {
        Self {
            jump_limit_deg: T::lit(90.0),
            contrast_floor: T::lit(0.05),
            low_contrast_jump_deg: T::lit(45.0),
            max_depth: 24,
            singular_contrast: T::lit(SINGULAR_CONTRAST),
        }
    }
}

/// A sample produced by the continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Continued<T> {
    pub s: T,
    pub c: Complex<T>,
    pub phase_deg: T,
    /// Inserted by bisection rather than requested by the caller.
    pub refined: bool,
}

/// Parameter value at which the continuation met a zero (or could not
/// resolve the branch within the depth limit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularAt<T>(pub T);

impl<T: Real> Refinement<T> {
    pub fn is_singular(&self, c: Complex<T>) -> bool {
        !(c.norm() >= self.singular_contrast)
    }

    /// Continues the phase from `start` to the point `(s1, c1)`.
    ///
    /// Refined interior samples are appended to `out`; the end point itself
    /// is not. Returns the continued phase at `s1`.
    pub fn advance<F>(
        &self,
        f: &mut F,
        start: (T, Complex<T>, T),
        end: (T, Complex<T>),
        out: &mut Vec<Continued<T>>,
    ) -> Result<T, SingularAt<T>>
    where
        F: FnMut(T) -> Complex<T>,
    {
        if self.is_singular(end.1) {
            return Err(SingularAt(end.0));
        }
        self.step(f, start, end, 0, out)
    }

    fn step<F>(
        &self,
        f: &mut F,
        (s0, c0, p0): (T, Complex<T>, T),
        (s1, c1): (T, Complex<T>),
        depth: u32,
        out: &mut Vec<Continued<T>>,
    ) -> Result<T, SingularAt<T>>
    where
        F: FnMut(T) -> Complex<T>,
    {
        let jump = phase_step_deg(c0, c1);
        let low = c0.norm().min(c1.norm()) < self.contrast_floor;
        let limit = if low { self.low_contrast_jump_deg } else { self.jump_limit_deg };
        if jump.abs() < limit {
            return Ok(p0 + jump);
        }
        let mid = (s0 + s1) / T::lit(2.0);
        if depth >= self.max_depth || mid <= s0.min(s1) || mid >= s0.max(s1) {
            if jump.abs() < self.jump_limit_deg {
                return Ok(p0 + jump);
            }
            return Err(SingularAt(mid));
        }
        let cm = f(mid);
        if self.is_singular(cm) {
            return Err(SingularAt(mid));
        }
        let pm = self.step(f, (s0, c0, p0), (mid, cm), depth + 1, out)?;
        out.push(Continued { s: mid, c: cm, phase_deg: pm, refined: true });
        self.step(f, (mid, cm, pm), (s1, c1), depth + 1, out)
    }

    /// Continues along `s0 → s1` using `steps` equal base steps; returns every
    /// sample including both ends. The first phase is the principal phase.
    pub fn continue_over<F>(
        &self,
        mut f: F,
        s0: T,
        s1: T,
        steps: usize,
    ) -> Result<Vec<Continued<T>>, SingularAt<T>>
    where
        F: FnMut(T) -> Complex<T>,
    {
        let steps = steps.max(1);
        let c0 = f(s0);
        if self.is_singular(c0) {
            return Err(SingularAt(s0));
        }
        let mut out = vec![Continued { s: s0, c: c0, phase_deg: crate::scalar::arg_deg(c0), refined: false }];
        for k in 1..=steps {
            let s = if k == steps {
                s1
            } else {
                s0 + (s1 - s0) * T::lit(k as f64) / T::lit(steps as f64)
            };
            let c = f(s);
            let prev = *out.last().expect("nonempty");
            let phase = self.advance(&mut f, (prev.s, prev.c, prev.phase_deg), (s, c), &mut out)?;
            out.push(Continued { s, c, phase_deg: phase, refined: false });
        }
        Ok(out)
    }
}
