use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::rotation::Rotation;
use crate::spin::wigner::{wigner_d, CMatrix};

/// Largest supported spin is j = 25 (2j = 50).
pub const MAX_TWICE_J: u32 = 50;

/// A spin quantum number j = n/2, stored as n = 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const HALF: Spin = Spin(1);

    pub fn from_twice(twice_j: u32) -> Result<Self> {
        if twice_j == 0 || twice_j > MAX_TWICE_J {
            return Err(Error::UnsupportedSpin { twice_j });
        }
        Ok(Spin(twice_j))
    }

    /// Parses a half-integer such as `0.5`, `1`, `2.5`.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = (2.0 * j).round();
        if !j.is_finite() || (2.0 * j - twice).abs() > 1e-9 || twice < 1.0 {
            return Err(Error::InvalidArgument(format!("j = {j} is not a positive half-integer")));
        }
        Self::from_twice(twice as u32)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Dimension 2j + 1.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// 2m for basis index `i` (basis ordered m = j, j−1, …, −j).
    pub fn twice_m(self, i: usize) -> i32 {
        self.0 as i32 - 2 * i as i32
    }

    pub fn index_of(self, twice_m: i32) -> Result<usize> {
        let tj = self.0 as i32;
        if twice_m.abs() > tj || (tj - twice_m) % 2 != 0 {
            return Err(Error::InvalidProjection { twice_j: self.0, twice_m });
        }
        Ok(((tj - twice_m) / 2) as usize)
    }
}

/// A normalized pure state of spin j in the |j, m⟩ basis, m = j..−j.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState<T> {
    spin: Spin,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> SpinState<T> {
    /// The eigenstate |j, m⟩ of J_z, with m given as 2m.
    pub fn basis(spin: Spin, twice_m: i32) -> Result<Self> {
        let idx = spin.index_of(twice_m)?;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); spin.dim()];
        amplitudes[idx] = Complex::new(T::one(), T::zero());
        Ok(Self { spin, amplitudes })
    }

    /// |+z⟩ of a spin-1/2.
    pub fn spin_up() -> Self {
        Self::basis(Spin::HALF, 1).expect("valid basis state")
    }

    /// |j, j⟩.
    pub fn stretched(spin: Spin) -> Self {
        Self::basis(spin, spin.twice() as i32).expect("valid basis state")
    }

    /// Normalizes arbitrary amplitudes; rejects a zero vector or a wrong length.
    pub fn from_amplitudes(spin: Spin, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for 2j = {}, got {}",
                spin.dim(),
                spin.twice(),
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        Ok(Self { spin, amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `e^{iφ}` (φ in degrees).
    pub fn with_global_phase(&self, phase_deg: T) -> Self {
        let f = Complex::from_polar(T::one(), crate::scalar::deg_to_rad(phase_deg));
        Self { spin: self.spin, amplitudes: self.amplitudes.iter().map(|a| *a * f).collect() }
    }

    /// `D^j(r) |self⟩`.
    pub fn rotated(&self, r: &Rotation<T>) -> Self {
        let d = wigner_d(self.spin, r).expect("spin validated on construction");
        self.transformed(&d)
    }

    /// Applies a precomputed representation matrix of matching dimension.
    pub fn transformed(&self, m: &CMatrix<T>) -> Self {
        Self { spin: self.spin, amplitudes: m.apply(&self.amplitudes) }
    }

    /// Expectation values (⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩) with ħ = 1.
    pub fn spin_expectation(&self) -> [T; 3] {
        let j = T::lit(self.spin.as_f64());
        let mut jz = T::zero();
        let mut jplus = Complex::new(T::zero(), T::zero());
        for (i, a) in self.amplitudes.iter().enumerate() {
            let m = T::lit(self.spin.twice_m(i) as f64 / 2.0);
            jz += m * a.norm_sqr();
            // J+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits at index i−1.
            if i > 0 {
                let k = (j * (j + T::one()) - m * (m + T::one())).sqrt();
                jplus += self.amplitudes[i - 1].conj() * *a * k;
            }
        }
        [jplus.re, jplus.im, jz]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.spin != other.spin {
            return Err(Error::SpinMismatch { left: self.spin.twice(), right: other.spin.twice() });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * *b))
    }
}
