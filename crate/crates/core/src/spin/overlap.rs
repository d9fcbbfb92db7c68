use num_complex::Complex;

use crate::error::Result;
use crate::scalar::{arg_deg, Real};
use crate::spin::state::SpinState;

/// Below this contrast the phase of an overlap is treated as undefined.
pub const SINGULAR_CONTRAST: f64 = 1e-9;

/// The scalar product c of two interfering states, with its modulus
/// (fringe contrast) and principal phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PancharatnamAmplitude<T> {
    pub value: Complex<T>,
    pub contrast: T,
    /// arg c in degrees, in (−180, 180]. Meaningless when `!phase_defined()`.
    pub principal_phase_deg: T,
}

impl<T: Real> PancharatnamAmplitude<T> {
    pub fn new(value: Complex<T>) -> Self {
        Self { value, contrast: value.norm(), principal_phase_deg: arg_deg(value) }
    }

    pub fn phase_defined(&self) -> bool {
        self.contrast >= T::lit(SINGULAR_CONTRAST)
    }

    /// The principal phase, or `None` at (numerical) orthogonality.
    pub fn phase_deg(&self) -> Option<T> {
        self.phase_defined().then_some(self.principal_phase_deg)
    }
}

/// `c = ⟨reference|target⟩`.
pub fn pancharatnam_overlap<T: Real>(
    reference: &SpinState<T>,
    target: &SpinState<T>,
) -> Result<PancharatnamAmplitude<T>> {
    Ok(PancharatnamAmplitude::new(reference.inner(target)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::state::Spin;

    #[test]
    fn identical_states() {
        let up = SpinState::<f64>::spin_up();
        let c = pancharatnam_overlap(&up, &up).unwrap();
        assert_eq!(c.value, Complex::new(1.0, 0.0));
        assert_eq!(c.phase_deg(), Some(0.0));
    }

    #[test]
    fn orthogonal_states_have_no_phase() {
        let up = SpinState::<f64>::spin_up();
        let down = SpinState::basis(Spin::HALF, -1).unwrap();
        let c = pancharatnam_overlap(&up, &down).unwrap();
        assert_eq!(c.contrast, 0.0);
        assert_eq!(c.phase_deg(), None);
    }
}
