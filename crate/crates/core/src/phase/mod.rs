//! Continuous phase along parameter-space paths: adaptive nearest-branch
//! unwrapping, winding numbers, and the dynamical/geometric split.

mod continuation;
mod path;
mod split;
mod trace;

pub use continuation::{Continued, Refinement, SingularAt};
pub use path::{ParameterPath, DEFAULT_STEPS_PER_SEGMENT};
pub use split::{dynamical_phase, geometric_phase, geometric_phase_with, PhaseSplit, DEFAULT_SUBSTEPS_PER_REGION};
pub use trace::{
    trace_field, trace_path, winding_number, winding_of_field, PhaseTrace, TraceSample, SIGN_CONVENTION,
    WINDING_SIGN,
};
