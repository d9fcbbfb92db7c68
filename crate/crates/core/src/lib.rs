//! Pancharatnam phase of a dual-flipper neutron interferometer, traced
//! continuously over the plane of coil fields.
//!
//! The physics is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the CLI and the scenario
//! drivers use.

pub mod apparatus;
pub mod cartographer;
pub mod cli;
pub mod error;
pub mod output;
pub mod phase;
pub mod scalar;
pub mod scenarios;
pub mod spin;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Rotation = spin::Rotation<f64>;
pub type Region = spin::Region<f64>;
pub type SpinState = spin::SpinState<f64>;
pub type CMatrix = spin::CMatrix<f64>;
pub type ParameterPoint = apparatus::ParameterPoint<f64>;
pub type ApparatusConfig = apparatus::ApparatusConfig<f64>;
pub type CoilModel = apparatus::CoilModel<f64>;
pub type FlipperOrientation = apparatus::FlipperOrientation<f64>;
pub type ParameterPath = phase::ParameterPath<f64>;
pub type PhaseTrace = phase::PhaseTrace<f64>;
pub type PhaseSplit = phase::PhaseSplit<f64>;
pub type Rect = cartographer::Rect<f64>;
pub type Singularity = cartographer::Singularity<f64>;
pub type DbetaRow = scenarios::DbetaRow<f64>;

pub type RotationF32 = spin::Rotation<f32>;
pub type SpinStateF32 = spin::SpinState<f32>;
pub type ParameterPointF32 = apparatus::ParameterPoint<f32>;
pub type ApparatusConfigF32 = apparatus::ApparatusConfig<f32>;

pub use apparatus::Mode;
pub use spin::Spin;
