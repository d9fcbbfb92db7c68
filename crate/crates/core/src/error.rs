use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("undefined rotation axis")]
    UndefinedAxis,

    #[error("unsupported spin j = {twice_j}/2 (supported: 1/2 ..= 25)")]
    UnsupportedSpin { twice_j: u32 },

    #[error("invalid magnetic quantum number 2m = {twice_m} for 2j = {twice_j}")]
    InvalidProjection { twice_j: u32, twice_m: i32 },

    #[error("spin mismatch: 2j = {left} vs 2j = {right}")]
    SpinMismatch { left: u32, right: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Pancharatnam phase is only defined while the contrast is nonzero.
    #[error("path passes through a phase singularity; phase undefined (near b1y = {b1y}, b2y = {b2y})")]
    Singular { b1y: f64, b2y: f64 },

    /// Same condition met while tracing a spinor through a region list.
    #[error("evolving state became orthogonal to the reference in region {region} (fraction {fraction}); phase undefined")]
    SingularEvolution { region: usize, fraction: f64 },

    /// A one-parameter scan (δβ, plate angle) met a zero of the overlap.
    #[error("scan passes through a phase singularity at {parameter_deg} deg; phase undefined")]
    SingularScan { parameter_deg: f64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}
