//! The interferometer model.
//!
//! Each arm carries a dual flipper: two coil regions traversed in order,
//! coil 1 first. Inside a coil the spin precesses about the total field
//! `b·coil_axis + guide·ẑ` by `|field|` degrees (fields are measured in
//! degrees of precession). The guide field defaults to `180/√2`, so at
//! `b = ±180/√2` a coil is an exact π flip about `(0, ±1, 1)/√2`.
//!
//! One arm is frozen at `fixed_point` (default I = q(−180, 180)); the other
//! is set to the scanned point p. The interfering states are
//! `U(fixed)|ψ⟩` and `U(p)|ψ⟩`, and
//!
//! ```text
//!   c(p) = ⟨ψ| D(U(fixed)⁻¹ U(p)) |ψ⟩.
//! ```
//!
//! With the defaults c(I) = 1, c(F) = −1, and c vanishes at (0, 0) and at
//! q(180, 180).
//!
//! The δβ experiment is modelled separately by [`flipper_regions`]: two flips
//! about transverse axes at azimuths 0° and 90° + δβ, either exact π flips
//! (`IdealTransverse`) or flips of `180°·cos(δβ/2)` (`RealisticGuide`).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{deg_to_rad, q, Real};
use crate::spin::{
    compose_regions, wigner_d, PancharatnamAmplitude, Region, Rotation, Spin, SpinState,
};

/// A setting of the two coil fields of the variable flipper.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParameterPoint<T> {
    pub b1y: T,
    pub b2y: T,
}

impl<T: Real> ParameterPoint<T> {
    pub fn new(b1y: T, b2y: T) -> Self {
        Self { b1y, b2y }
    }

    /// The labelled point q(a, b) = (a/√2, b/√2).
    pub fn q_scaled(a: T, b: T) -> Self {
        Self { b1y: a * q(), b2y: b * q() }
    }

    /// I = q(−180, 180), where the field-reversal passage starts.
    pub fn initial() -> Self {
        Self::q_scaled(T::lit(-180.0), T::lit(180.0))
    }

    /// F = q(180, −180), the current-reversed image of I.
    pub fn reversed_end() -> Self {
        Self::q_scaled(T::lit(180.0), T::lit(-180.0))
    }

    pub fn origin() -> Self {
        Self { b1y: T::zero(), b2y: T::zero() }
    }

    /// Current reversal: both coil fields change sign.
    pub fn reversed(&self) -> Self {
        Self { b1y: -self.b1y, b2y: -self.b2y }
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.b1y - other.b1y).hypot(self.b2y - other.b2y)
    }

    pub fn lerp(&self, other: &Self, t: T) -> Self {
        Self {
            b1y: self.b1y + (other.b1y - self.b1y) * t,
            b2y: self.b2y + (other.b2y - self.b2y) * t,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.b1y.is_finite() && self.b2y.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Coil regions include the guide field; δβ flips are shortened by cos(δβ/2).
    #[default]
    RealisticGuide,
    /// Textbook flipper: exact transverse π flips.
    IdealTransverse,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::RealisticGuide => "realistic_guide",
            Mode::IdealTransverse => "ideal_transverse",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "realistic_guide" | "realistic" => Ok(Mode::RealisticGuide),
            "ideal_transverse" | "ideal" => Ok(Mode::IdealTransverse),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

/// 180/√2, the guide field that makes the operating points exact π flips.
pub fn default_guide_field<T: Real>() -> T {
    T::lit(180.0) * q::<T>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusConfig<T> {
    pub guide_field: T,
    pub coil_axis: [T; 3],
    pub fixed_point: ParameterPoint<T>,
    pub input_state: SpinState<T>,
    pub mode: Mode,
}

impl<T: Real> Default for ApparatusConfig<T> {
    fn default() -> Self {
        Self {
            guide_field: default_guide_field(),
            coil_axis: [T::zero(), T::one(), T::zero()],
            fixed_point: ParameterPoint::initial(),
            input_state: SpinState::spin_up(),
            mode: Mode::RealisticGuide,
        }
    }
}

impl<T: Real> ApparatusConfig<T> {
    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_input(mut self, input: SpinState<T>) -> Self {
        self.input_state = input;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::lit(1e-12);
        if !(self.guide_field >= T::zero()) || !self.guide_field.is_finite() {
            return Err(Error::InvalidConfig("guide_field must be finite and >= 0".into()));
        }
        let [x, y, z] = self.coil_axis;
        let norm = (x * x + y * y + z * z).sqrt();
        if !((norm - T::one()).abs() <= tol) {
            return Err(Error::InvalidConfig("coil_axis must be a unit vector".into()));
        }
        if !(z.abs() <= tol) {
            return Err(Error::InvalidConfig("coil_axis must be orthogonal to z".into()));
        }
        if !self.fixed_point.is_finite() {
            return Err(Error::InvalidConfig("fixed_point must be finite".into()));
        }
        Ok(())
    }

    fn require_guide_model(&self) -> Result<()> {
        match self.mode {
            Mode::RealisticGuide => Ok(()),
            Mode::IdealTransverse => Err(Error::InvalidConfig(
                "the coil-field model requires mode realistic_guide".into(),
            )),
        }
    }
}

/// Physical rotation δβ of one dual flipper relative to the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipperOrientation<T> {
    pub delta_beta_deg: T,
}

impl<T: Real> FlipperOrientation<T> {
    pub fn new(delta_beta_deg: T) -> Self {
        Self { delta_beta_deg }
    }
}

fn coil_region<T: Real>(b: T, config: &ApparatusConfig<T>) -> Region<T> {
    let [ax, ay, az] = config.coil_axis;
    let field = [b * ax, b * ay, b * az + config.guide_field];
    let magnitude = (field[0] * field[0] + field[1] * field[1] + field[2] * field[2]).sqrt();
    Region::new(field, magnitude)
}

/// Precession inside one coil set to `b`.
pub fn coil_unitary<T: Real>(b: T, config: &ApparatusConfig<T>) -> Result<Rotation<T>> {
    config.require_guide_model()?;
    coil_region(b, config).rotation()
}

/// The two coil regions of a dual flipper set to `p`, coil 1 first.
pub fn dual_flipper_regions<T: Real>(
    p: &ParameterPoint<T>,
    config: &ApparatusConfig<T>,
) -> Result<[Region<T>; 2]> {
    config.require_guide_model()?;
    Ok([coil_region(p.b1y, config), coil_region(p.b2y, config)])
}

pub fn dual_flipper_unitary<T: Real>(
    p: &ParameterPoint<T>,
    config: &ApparatusConfig<T>,
) -> Result<Rotation<T>> {
    compose_regions(&dual_flipper_regions(p, config)?)
}

/// `U(fixed)⁻¹ · U(p)`.
pub fn relative_unitary<T: Real>(
    p: &ParameterPoint<T>,
    config: &ApparatusConfig<T>,
) -> Result<Rotation<T>> {
    let fixed = dual_flipper_unitary(&config.fixed_point, config)?;
    Ok(Rotation::compose(&fixed.inverse(), &dual_flipper_unitary(p, config)?))
}

/// `c(p) = ⟨ψ_fixed | ψ_variable⟩`.
pub fn pancharatnam_amplitude<T: Real>(
    p: &ParameterPoint<T>,
    config: &ApparatusConfig<T>,
) -> Result<PancharatnamAmplitude<T>> {
    Ok(CoilModel::new(config)?.amplitude(p))
}

/// A validated configuration with the fixed arm's inverse cached, for
/// repeated evaluation of c over the parameter plane.
#[derive(Debug, Clone)]
pub struct CoilModel<T> {
    config: ApparatusConfig<T>,
    fixed_inverse: Rotation<T>,
}

impl<T: Real> CoilModel<T> {
    pub fn new(config: &ApparatusConfig<T>) -> Result<Self> {
        config.validate()?;
        let fixed = dual_flipper_unitary(&config.fixed_point, config)?;
        Ok(Self { config: config.clone(), fixed_inverse: fixed.inverse() })
    }

    pub fn config(&self) -> &ApparatusConfig<T> {
        &self.config
    }

    pub fn relative(&self, p: &ParameterPoint<T>) -> Rotation<T> {
        let u1 = coil_region(p.b1y, &self.config).rotation().expect("coil region is well formed");
        let u2 = coil_region(p.b2y, &self.config).rotation().expect("coil region is well formed");
        Rotation::compose(&self.fixed_inverse, &Rotation::compose(&u2, &u1))
    }

    pub fn value(&self, p: &ParameterPoint<T>) -> Complex<T> {
        let r = self.relative(p);
        let psi = &self.config.input_state;
        if psi.spin() == Spin::HALF {
            let u = r.matrix();
            let a = psi.amplitudes();
            let v0 = u[0][0] * a[0] + u[0][1] * a[1];
            let v1 = u[1][0] * a[0] + u[1][1] * a[1];
            a[0].conj() * v0 + a[1].conj() * v1
        } else {
            let d = wigner_d(psi.spin(), &r).expect("spin validated on construction");
            psi.inner(&psi.transformed(&d)).expect("same spin")
        }
    }

    pub fn amplitude(&self, p: &ParameterPoint<T>) -> PancharatnamAmplitude<T> {
        PancharatnamAmplitude::new(self.value(p))
    }
}

fn transverse_axis<T: Real>(azimuth_deg: T) -> [T; 3] {
    let a = deg_to_rad(azimuth_deg);
    [a.cos(), a.sin(), T::zero()]
}

/// The two flips of a dual flipper rotated by δβ: azimuths 0° and 90° + δβ.
/// In `RealisticGuide` mode each flip angle is `180°·cos(δβ/2)`.
pub fn flipper_regions<T: Real>(orientation: &FlipperOrientation<T>, mode: Mode) -> [Region<T>; 2] {
    let db = orientation.delta_beta_deg;
    let flip = match mode {
        Mode::IdealTransverse => T::lit(180.0),
        Mode::RealisticGuide => T::lit(180.0) * (deg_to_rad(db) / T::lit(2.0)).cos(),
    };
    [
        Region::new(transverse_axis(T::zero()), flip),
        Region::new(transverse_axis(T::lit(90.0) + db), flip),
    ]
}

pub fn rotated_flipper_unitary<T: Real>(
    orientation: &FlipperOrientation<T>,
    config: &ApparatusConfig<T>,
) -> Rotation<T> {
    compose_regions(&flipper_regions(orientation, config.mode)).expect("transverse axes are nonzero")
}

/// JSON form of [`ApparatusConfig`]. Every key is optional and falls back
/// to the default; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default = "default_guide_field::<f64>")]
    pub guide_field: f64,
    #[serde(default = "default_coil_axis")]
    pub coil_axis: [f64; 3],
    #[serde(default = "default_fixed_point")]
    pub fixed_point: PointJson,
    #[serde(default = "default_input_j")]
    pub input_j: f64,
    #[serde(default = "default_input_m")]
    pub input_m: f64,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub b1y: f64,
    pub b2y: f64,
}

fn default_coil_axis() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}

fn default_fixed_point() -> PointJson {
    let p = ParameterPoint::<f64>::initial();
    PointJson { b1y: p.b1y, b2y: p.b2y }
}

fn default_input_j() -> f64 {
    0.5
}

fn default_input_m() -> f64 {
    0.5
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile::from(&ApparatusConfig::<f64>::default())
    }
}

impl ConfigFile {
    pub fn into_config(self) -> Result<ApparatusConfig<f64>> {
        let spin = Spin::from_f64(self.input_j).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let twice_m = (2.0 * self.input_m).round();
        if (2.0 * self.input_m - twice_m).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!("input_m = {} is not a half-integer", self.input_m)));
        }
        let input_state = SpinState::basis(spin, twice_m as i32)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let config = ApparatusConfig {
            guide_field: self.guide_field,
            coil_axis: self.coil_axis,
            fixed_point: ParameterPoint::new(self.fixed_point.b1y, self.fixed_point.b2y),
            input_state,
            mode: self.mode,
        };
        config.validate()?;
        Ok(config)
    }
}

impl From<&ApparatusConfig<f64>> for ConfigFile {
    /// Echo of a configuration. The input state is reported by its dominant
    /// basis component, which is exact for the basis states the file can express.
    fn from(c: &ApparatusConfig<f64>) -> Self {
        let spin = c.input_state.spin();
        let (idx, _) = c
            .input_state
            .amplitudes()
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| if a.norm() > best.1 { (i, a.norm()) } else { best });
        ConfigFile {
            guide_field: c.guide_field,
            coil_axis: c.coil_axis,
            fixed_point: PointJson { b1y: c.fixed_point.b1y, b2y: c.fixed_point.b2y },
            input_j: spin.as_f64(),
            input_m: spin.twice_m(idx) as f64 / 2.0,
            mode: c.mode,
        }
    }
}

impl ApparatusConfig<f64> {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        file.into_config()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ConfigFile::from(self)).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guide_field_value() {
        assert!((default_guide_field::<f64>() - 127.2792206136).abs() < 1e-9);
    }

    #[test]
    fn ideal_mode_rejects_coil_model() {
        let cfg = ApparatusConfig::<f64>::default().with_mode(Mode::IdealTransverse);
        assert!(matches!(coil_unitary(1.0, &cfg), Err(Error::InvalidConfig(_))));
        assert!(pancharatnam_amplitude(&ParameterPoint::origin(), &cfg).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = ApparatusConfig::<f64>::default();
        cfg.coil_axis = [0.0, 0.6, 0.8];
        assert!(cfg.validate().is_err());
        cfg.coil_axis = [0.0, 2.0, 0.0];
        assert!(cfg.validate().is_err());
        cfg.coil_axis = [0.6, 0.8, 0.0];
        assert!(cfg.validate().is_ok());
        cfg.guide_field = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_json_keys_are_exact() {
        let v = ApparatusConfig::<f64>::default().to_json_value();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["coil_axis", "fixed_point", "guide_field", "input_j", "input_m", "mode"]);
        assert_eq!(v["mode"], "realistic_guide");
    }

    #[test]
    fn config_json_partial_and_unknown() {
        let cfg = ApparatusConfig::from_json(r#"{"input_j": 1.5, "input_m": -0.5}"#).unwrap();
        assert_eq!(cfg.input_state.spin().twice(), 3);
        assert_eq!(cfg.input_state.amplitudes()[2].re, 1.0);
        assert_eq!(cfg.guide_field, default_guide_field::<f64>());
        assert!(ApparatusConfig::from_json(r#"{"guide": 1.0}"#).is_err());
        assert!(ApparatusConfig::from_json(r#"{"input_m": 1.5}"#).is_err());
        assert!(ApparatusConfig::from_json(r#"{"mode": "sideways"}"#).is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = ApparatusConfig::<f64>::default().with_mode(Mode::IdealTransverse);
        let text = serde_json::to_string(&cfg.to_json_value()).unwrap();
        assert_eq!(ApparatusConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn zero_delta_beta_is_mode_independent() {
        let o = FlipperOrientation::new(0.0_f64);
        let a = rotated_flipper_unitary(&o, &ApparatusConfig::default().with_mode(Mode::IdealTransverse));
        let b = rotated_flipper_unitary(&o, &ApparatusConfig::default().with_mode(Mode::RealisticGuide));
        assert!(a.distance(&b) < 1e-12);
    }
}
