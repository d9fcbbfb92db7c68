use num_complex::Complex;

use crate::apparatus::{ApparatusConfig, CoilModel, ParameterPoint};
use crate::error::{Error, Result};
use crate::phase::continuation::{Continued, Refinement};
use crate::phase::path::ParameterPath;
use crate::scalar::{arg_deg, Real};

/// Orientation and phase conventions, echoed in every output file.
pub const SIGN_CONVENTION: &str = "phase = arg<psi_fixed|psi_variable> in degrees; \
     winding counts counterclockwise circulation in the (b1y horizontal, b2y vertical) plane; sigma = +1";

/// Global orientation sign σ. With σ = +1 the counterclockwise winding of
/// arg c around the origin is −1.
pub const WINDING_SIGN: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample<T> {
    /// Base samples carry integer indices; refined ones sit in between.
    pub step: T,
    pub arclength: T,
    pub point: ParameterPoint<T>,
    pub c: Complex<T>,
    pub contrast: T,
    pub phase_unwrapped_deg: T,
    pub refined: bool,
}

/// The continuously unwrapped phase of c along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrace<T> {
    pub path: ParameterPath<T>,
    pub samples: Vec<TraceSample<T>>,
    /// Last minus first unwrapped phase; never reduced modulo 360.
    pub total_phase_deg: T,
    pub min_contrast: T,
}

impl<T: Real> PhaseTrace<T> {
    pub fn first(&self) -> &TraceSample<T> {
        &self.samples[0]
    }

    pub fn last(&self) -> &TraceSample<T> {
        self.samples.last().expect("trace is never empty")
    }

    pub fn length(&self) -> T {
        self.last().arclength
    }

    /// Sum of |Δphase| over consecutive samples.
    pub fn total_variation_deg(&self) -> T {
        self.samples
            .windows(2)
            .map(|w| (w[1].phase_unwrapped_deg - w[0].phase_unwrapped_deg).abs())
            .sum()
    }

    /// Largest |Δphase / Δarclength| between consecutive samples.
    pub fn max_slope_deg_per_unit(&self) -> T {
        self.samples.windows(2).fold(T::zero(), |m, w| {
            let ds = w[1].arclength - w[0].arclength;
            m.max((w[1].phase_unwrapped_deg - w[0].phase_unwrapped_deg).abs() / ds)
        })
    }

    /// Phase variation accumulated on steps whose midpoint lies within
    /// `radius` (in arclength) of `center`.
    pub fn variation_within_deg(&self, center: T, radius: T) -> T {
        self.samples
            .windows(2)
            .filter(|w| {
                let mid = (w[0].arclength + w[1].arclength) / T::lit(2.0);
                (mid - center).abs() <= radius
            })
            .map(|w| (w[1].phase_unwrapped_deg - w[0].phase_unwrapped_deg).abs())
            .sum()
    }
}

/// Traces c along `path` under `config`.
pub fn trace_path<T: Real>(path: &ParameterPath<T>, config: &ApparatusConfig<T>) -> Result<PhaseTrace<T>> {
    let model = CoilModel::new(config)?;
    trace_field(path, |p| model.value(p), &Refinement::default())
}

/// Traces an arbitrary complex field along `path`.
pub fn trace_field<T, F>(path: &ParameterPath<T>, field: F, refinement: &Refinement<T>) -> Result<PhaseTrace<T>>
where
    T: Real,
    F: Fn(&ParameterPoint<T>) -> Complex<T>,
{
    let steps = path.steps_per_segment();
    let steps_t = T::lit(steps as f64);
    let singular = |p: ParameterPoint<T>| Error::Singular { b1y: p.b1y.to_f64_lossy(), b2y: p.b2y.to_f64_lossy() };

    let start = path.vertices()[0];
    let c0 = field(&start);
    if refinement.is_singular(c0) {
        return Err(singular(start));
    }
    let mut samples = vec![TraceSample {
        step: T::zero(),
        arclength: T::zero(),
        point: start,
        c: c0,
        contrast: c0.norm(),
        phase_unwrapped_deg: arg_deg(c0),
        refined: false,
    }];

    let mut arclength_before = T::zero();
    let mut scratch: Vec<Continued<T>> = Vec::new();
    for (seg, (a, b)) in path.segments().enumerate() {
        let seg_len = a.distance(&b);
        let seg_offset = T::lit((seg * steps) as f64);
        let mut eval = |t: T| field(&a.lerp(&b, t));
        let mut t_prev = T::zero();
        for k in 1..=steps {
            let t = if k == steps { T::one() } else { T::lit(k as f64) / steps_t };
            let point = if k == steps { b } else { a.lerp(&b, t) };
            let c = field(&point);
            let prev = *samples.last().expect("nonempty");
            scratch.clear();
            let phase = refinement
                .advance(&mut eval, (t_prev, prev.c, prev.phase_unwrapped_deg), (t, c), &mut scratch)
                .map_err(|s| singular(a.lerp(&b, s.0)))?;
            for r in &scratch {
                samples.push(TraceSample {
                    step: seg_offset + r.s * steps_t,
                    arclength: arclength_before + r.s * seg_len,
                    point: a.lerp(&b, r.s),
                    c: r.c,
                    contrast: r.c.norm(),
                    phase_unwrapped_deg: r.phase_deg,
                    refined: true,
                });
            }
            samples.push(TraceSample {
                step: seg_offset + T::lit(k as f64),
                arclength: if k == steps { arclength_before + seg_len } else { arclength_before + t * seg_len },
                point,
                c,
                contrast: c.norm(),
                phase_unwrapped_deg: phase,
                refined: false,
            });
            t_prev = t;
        }
        arclength_before += seg_len;
    }

    let total_phase_deg = samples.last().expect("nonempty").phase_unwrapped_deg - samples[0].phase_unwrapped_deg;
    let min_contrast = samples.iter().fold(T::infinity(), |m, s| m.min(s.contrast));
    Ok(PhaseTrace { path: path.clone(), samples, total_phase_deg, min_contrast })
}

/// Total phase around a closed path in units of 360°, signed by [`WINDING_SIGN`].
pub fn winding_number<T: Real>(path: &ParameterPath<T>, config: &ApparatusConfig<T>) -> Result<i64> {
    let model = CoilModel::new(config)?;
    winding_of_field(path, |p| model.value(p), &Refinement::default())
}

pub fn winding_of_field<T, F>(path: &ParameterPath<T>, field: F, refinement: &Refinement<T>) -> Result<i64>
where
    T: Real,
    F: Fn(&ParameterPoint<T>) -> Complex<T>,
{
    if !path.is_closed() {
        return Err(Error::InvalidPath("winding number needs a closed path".into()));
    }
    let trace = trace_field(path, field, refinement)?;
    let turns = (trace.total_phase_deg / T::lit(360.0)).to_f64_lossy();
    let rounded = turns.round();
    if !((turns - rounded).abs() < 1e-6) {
        return Err(Error::Consistency(format!("non-integer winding {turns} around a closed path")));
    }
    Ok(rounded as i64 * WINDING_SIGN)
}
