//! Dynamical / geometric decomposition of the phase acquired by a spinor
//! passing through piecewise-constant field regions.

use crate::error::{Error, Result};
use crate::phase::continuation::Refinement;
use crate::scalar::{arg_deg, Real};
use crate::spin::{wigner_d, Region, SpinState};

pub const DEFAULT_SUBSTEPS_PER_REGION: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSplit<T> {
    pub total_deg: T,
    pub dynamical_deg: T,
    pub geometric_deg: T,
}

impl<T: Real> PhaseSplit<T> {
    pub fn from_total(total_deg: T, dynamical_deg: T) -> Self {
        Self { total_deg, dynamical_deg, geometric_deg: total_deg - dynamical_deg }
    }
}

/// `−Σ θ_i ⟨ψ_i| n̂_i·J |ψ_i⟩`, ψ_i being the state entering region i.
///
/// The generator commutes with its own evolution, so the entry expectation
/// holds across the whole region.
pub fn dynamical_phase<T: Real>(regions: &[Region<T>], input: &SpinState<T>) -> Result<T> {
    let mut psi = input.clone();
    let mut phase = T::zero();
    for region in regions {
        let rotation = region.rotation()?;
        let n = region.unit_axis();
        let j = psi.spin_expectation();
        phase -= region.angle_deg * (n[0] * j[0] + n[1] * j[1] + n[2] * j[2]);
        psi = psi.rotated(&rotation);
    }
    Ok(phase)
}

/// Total phase of ⟨ψ_in|ψ(s)⟩ continued through the regions, and its
/// split into dynamical and geometric parts.
pub fn geometric_phase<T: Real>(regions: &[Region<T>], input: &SpinState<T>) -> Result<PhaseSplit<T>> {
    geometric_phase_with(regions, input, DEFAULT_SUBSTEPS_PER_REGION)
}

pub fn geometric_phase_with<T: Real>(
    regions: &[Region<T>],
    input: &SpinState<T>,
    substeps_per_region: usize,
) -> Result<PhaseSplit<T>> {
    if substeps_per_region < DEFAULT_SUBSTEPS_PER_REGION {
        return Err(Error::InvalidArgument(format!(
            "at least {DEFAULT_SUBSTEPS_PER_REGION} sub-steps per region are required"
        )));
    }
    let refinement = Refinement::default();
    let spin = input.spin();
    let mut entry = input.clone();
    let mut phase: Option<T> = None;
    for (index, region) in regions.iter().enumerate() {
        region.rotation()?;
        let evolve = |t: T| {
            let r = region.partial(t).rotation().expect("axis checked above");
            let d = wigner_d(spin, &r).expect("spin validated on construction");
            input.inner(&entry.transformed(&d)).expect("same spin")
        };
        let start_phase = match phase {
            Some(p) => p,
            None => {
                let c0 = input.inner(&entry).expect("same spin");
                if refinement.is_singular(c0) {
                    return Err(Error::SingularEvolution { region: index, fraction: 0.0 });
                }
                arg_deg(c0)
            }
        };
        let samples = refinement
            .continue_over(evolve, T::zero(), T::one(), substeps_per_region)
            .map_err(|s| Error::SingularEvolution { region: index, fraction: s.0.to_f64_lossy() })?;
        let offset = start_phase - samples[0].phase_deg;
        phase = Some(samples.last().expect("nonempty").phase_deg + offset);
        entry = entry.rotated(&region.rotation()?);
    }
    let start = arg_deg(input.inner(input)?);
    let total = phase.unwrap_or(start) - start;
    Ok(PhaseSplit::from_total(total, dynamical_phase(regions, input)?))
}
