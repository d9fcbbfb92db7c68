//! End-to-end experiment drivers: the three Figure-1 style paths, field
//! reversal along arbitrary detours, the δβ scan of a rotated dual flipper,
//! its spin-j generalisation, and the half-wave-plate optics analogue.

use num_complex::Complex;

use crate::apparatus::{flipper_regions, ApparatusConfig, FlipperOrientation, Mode, ParameterPoint};
use crate::error::{Error, Result};
use crate::phase::{dynamical_phase, trace_path, ParameterPath, PhaseTrace, Refinement, DEFAULT_STEPS_PER_SEGMENT};
use crate::scalar::{arg_deg, Real};
use crate::spin::{compose_regions, wigner_d, Region, Rotation, Spin, SpinState};

/// A = q(179, 179), just below the +1 zero at q(180, 180).
pub fn point_a<T: Real>() -> ParameterPoint<T> {
    ParameterPoint::q_scaled(T::lit(179.0), T::lit(179.0))
}

/// B = q(181, 181), just above it.
pub fn point_b<T: Real>() -> ParameterPoint<T> {
    ParameterPoint::q_scaled(T::lit(181.0), T::lit(181.0))
}

/// C = q(1, 1), next to the −1 zero at the origin.
pub fn point_c<T: Real>() -> ParameterPoint<T> {
    ParameterPoint::q_scaled(T::one(), T::one())
}

/// The polyline I → vias… → F.
pub fn reversal_path<T: Real>(vias: &[ParameterPoint<T>], steps_per_segment: usize) -> Result<ParameterPath<T>> {
    let mut vertices = Vec::with_capacity(vias.len() + 2);
    vertices.push(ParameterPoint::initial());
    vertices.extend_from_slice(vias);
    vertices.push(ParameterPoint::reversed_end());
    ParameterPath::new(vertices, steps_per_segment, false)
}

/// Vias for I → A → F → B → I → A → F, which circles q(180, 180) once more
/// than IAF and picks up ±540°.
pub fn looping_vias<T: Real>() -> Vec<ParameterPoint<T>> {
    vec![point_a(), ParameterPoint::reversed_end(), point_b(), ParameterPoint::initial(), point_a()]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1<T> {
    pub iaf: PhaseTrace<T>,
    pub ibf: PhaseTrace<T>,
    pub icf: PhaseTrace<T>,
}

impl<T: Real> Figure1<T> {
    pub fn traces(&self) -> [(&'static str, &PhaseTrace<T>); 3] {
        [("IAF", &self.iaf), ("IBF", &self.ibf), ("ICF", &self.icf)]
    }

    /// total(IAF) − total(IBF); ±360 when the paths straddle one zero.
    pub fn split_deg(&self) -> T {
        self.iaf.total_phase_deg - self.ibf.total_phase_deg
    }

    /// Arclength of C along ICF.
    pub fn c_arclength(&self) -> T {
        ParameterPoint::initial().distance(&point_c())
    }

    /// Fraction of ICF's total variation within `radius` of C.
    pub fn icf_concentration(&self, radius: T) -> T {
        self.icf.variation_within_deg(self.c_arclength(), radius) / self.icf.total_variation_deg()
    }
}

pub fn run_figure1<T: Real>(config: &ApparatusConfig<T>) -> Result<Figure1<T>> {
    let run = |via| trace_path(&reversal_path(&[via], DEFAULT_STEPS_PER_SEGMENT)?, config);
    Ok(Figure1 { iaf: run(point_a())?, ibf: run(point_b())?, icf: run(point_c())? })
}

pub fn run_field_reversal<T: Real>(vias: &[ParameterPoint<T>], config: &ApparatusConfig<T>) -> Result<PhaseTrace<T>> {
    trace_path(&reversal_path(vias, DEFAULT_STEPS_PER_SEGMENT)?, config)
}

/// One δβ sample. `total_deg` is continued from δβ = 0, so it is absolute
/// rather than a principal value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbetaRow<T> {
    pub delta_beta_deg: T,
    pub total_deg: T,
    pub dynamical_deg: T,
    pub geometric_deg: T,
}

impl<T: Real> DbetaRow<T> {
    /// Departure from the ideal straight line `−2j·δβ`.
    pub fn deviation_deg(&self, spin: Spin) -> T {
        self.total_deg + T::lit(spin.as_f64() * 2.0) * self.delta_beta_deg
    }
}

/// Largest δβ increment between evaluations while continuing a scan.
const SCAN_SUBSTEP_DEG: f64 = 1.0;

/// Continues the phase of `f` from 0 out to each of `targets` (both signs),
/// never stepping more than [`SCAN_SUBSTEP_DEG`] between evaluations.
fn continue_from_zero<T: Real, F: FnMut(T) -> Complex<T>>(mut f: F, targets: &[T]) -> Result<Vec<T>> {
    let refinement = Refinement::<T>::default();
    let c0 = f(T::zero());
    if refinement.is_singular(c0) {
        return Err(Error::SingularScan { parameter_deg: 0.0 });
    }
    let p0 = arg_deg(c0);
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| targets[a].abs().partial_cmp(&targets[b].abs()).expect("finite"));
    let mut phases = vec![T::zero(); targets.len()];
    let mut scratch = Vec::new();
    for positive in [true, false] {
        let mut state = (T::zero(), c0, p0);
        for &i in order.iter().filter(|&&i| (targets[i] >= T::zero()) == positive) {
            let goal = targets[i];
            let span = (goal - state.0).abs().to_f64_lossy();
            let substeps = ((span / SCAN_SUBSTEP_DEG).ceil() as usize).max(1);
            let from = state.0;
            for k in 1..=substeps {
                let s = if k == substeps { goal } else { from + (goal - from) * T::lit(k as f64 / substeps as f64) };
                let c = f(s);
                scratch.clear();
                let p = refinement
                    .advance(&mut f, state, (s, c), &mut scratch)
                    .map_err(|at| Error::SingularScan { parameter_deg: at.0.to_f64_lossy() })?;
                state = (s, c, p);
            }
            phases[i] = state.2;
        }
    }
    Ok(phases)
}

/// `steps + 1` evenly spaced values covering `[lo, hi]`.
fn scan_grid<T: Real>((lo, hi): (T, T), steps: usize) -> Result<Vec<T>> {
    let limit = T::lit(180.0);
    if !(lo.is_finite() && hi.is_finite()) || lo < -limit || hi > limit || lo > hi {
        return Err(Error::InvalidArgument("δβ range must satisfy −180 ≤ lo ≤ hi ≤ 180".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("scan needs at least one step".into()));
    }
    Ok((0..=steps)
        .map(|k| if k == steps { hi } else { lo + (hi - lo) * T::lit(k as f64) / T::lit(steps as f64) })
        .collect())
}

/// Phase of the arm carrying a flipper rotated by δβ against a reference arm
/// whose flipper is unrotated, for the stretched state |j, j⟩.
///
/// The dynamical part is the difference of the two arms' dynamical phases;
/// the geometric part is the remainder.
pub fn run_dbeta_scan<T: Real>(mode: Mode, spin: Spin, range: (T, T), steps: usize) -> Result<Vec<DbetaRow<T>>> {
    let input = SpinState::<T>::stretched(spin);
    dbeta_scan_with_input(mode, &input, range, steps)
}

pub fn dbeta_scan_with_input<T: Real>(
    mode: Mode,
    input: &SpinState<T>,
    range: (T, T),
    steps: usize,
) -> Result<Vec<DbetaRow<T>>> {
    let grid = scan_grid(range, steps)?;
    let spin = input.spin();
    let reference = flipper_regions(&FlipperOrientation::new(T::zero()), mode);
    let reference_inverse = compose_regions(&reference)?.inverse();
    let reference_dynamical = dynamical_phase(&reference, input)?;
    let overlap = |db: T| {
        let regions = flipper_regions(&FlipperOrientation::new(db), mode);
        let rotated = compose_regions(&regions).expect("transverse axes");
        let relative = Rotation::compose(&reference_inverse, &rotated);
        let d = wigner_d(spin, &relative).expect("spin validated");
        input.inner(&input.transformed(&d)).expect("same spin")
    };
    let totals = continue_from_zero(overlap, &grid)?;
    grid.iter()
        .zip(totals)
        .map(|(&db, total)| {
            let regions = flipper_regions(&FlipperOrientation::new(db), mode);
            let dynamical = dynamical_phase(&regions, input)? - reference_dynamical;
            Ok(DbetaRow { delta_beta_deg: db, total_deg: total, dynamical_deg: dynamical, geometric_deg: total - dynamical })
        })
        .collect()
}

/// δβ scan of the spin-n/2 stretched state in the ideal model.
pub fn run_spin_scan<T: Real>(n: u32, range: (T, T), steps: usize) -> Result<Vec<DbetaRow<T>>> {
    run_dbeta_scan(Mode::IdealTransverse, Spin::from_twice(n)?, range, steps)
}

/// A half-wave plate with its fast axis at `phi_deg`: a half turn about the
/// equatorial Poincaré axis at azimuth 2φ.
pub fn half_wave_plate<T: Real>(phi_deg: T) -> Region<T> {
    let a = crate::scalar::deg_to_rad(T::lit(2.0) * phi_deg);
    Region::new([a.cos(), a.sin(), T::zero()], T::lit(180.0))
}

/// Two plates traversed in order, `first` then `second`.
pub fn plate_pair<T: Real>(first_deg: T, second_deg: T) -> Rotation<T> {
    compose_regions(&[half_wave_plate(first_deg), half_wave_plate(second_deg)]).expect("equatorial axis")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticsResult<T> {
    /// Phase of the (45°, 0°) pair relative to (0°, 45°), continued in the
    /// plate rotation from the unrotated pair.
    pub anticommutation_phase_deg: T,
    /// max |U(45,0) + U(0,45)| over matrix entries.
    pub sign_residual: T,
    /// Unrotated pair against itself.
    pub identity_phase_deg: T,
    /// (θ, phase) with the first plate at θ and the second at 45° − θ.
    pub rotation_scan: Vec<(T, T)>,
}

/// Plates at (θ, 45° − θ) against (0°, 45°) on circular input, continued from θ = 0.
pub fn plate_rotation_phases<T: Real>(thetas: &[T]) -> Result<Vec<T>> {
    let reference = plate_pair(T::zero(), T::lit(45.0)).inverse();
    let circular = SpinState::<T>::spin_up();
    let overlap = |theta: T| {
        let r = Rotation::compose(&reference, &plate_pair(theta, T::lit(45.0) - theta));
        let d = wigner_d(Spin::HALF, &r).expect("spin 1/2");
        circular.inner(&circular.transformed(&d)).expect("same spin")
    };
    continue_from_zero(overlap, thetas)
}

pub fn run_optics_hwp<T: Real>() -> Result<OpticsResult<T>> {
    let thetas: Vec<T> = (0..=9).map(|k| T::lit(5.0 * k as f64)).collect();
    let scan = plate_rotation_phases(&thetas)?;
    let ua = plate_pair(T::zero(), T::lit(45.0)).matrix();
    let ub = plate_pair(T::lit(45.0), T::zero()).matrix();
    let mut sign_residual = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            sign_residual = sign_residual.max((ua[i][j] + ub[i][j]).norm());
        }
    }
    let identity_phase_deg = plate_rotation_phases(&[T::zero()])?[0];
    Ok(OpticsResult {
        anticommutation_phase_deg: *scan.last().expect("nonempty"),
        sign_residual,
        identity_phase_deg,
        rotation_scan: thetas.into_iter().zip(scan).collect(),
    })
}
