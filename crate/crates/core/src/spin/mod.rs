//! Rotation algebra: SU(2) elements, spin-j representations, spinor states
//! and the Pancharatnam overlap.

mod overlap;
mod region;
mod rotation;
mod state;
mod wigner;

pub use overlap::{pancharatnam_overlap, PancharatnamAmplitude, SINGULAR_CONTRAST};
pub use region::{compose_regions, Region};
pub use rotation::{Rotation, Su2Matrix};
pub use state::{Spin, SpinState, MAX_TWICE_J};
pub use wigner::{wigner_d, CMatrix};
