//! Spin-j representation matrices D^j(r) in the |j, m⟩ basis (m = j..−j).
//!
//! The rotation is split as `R_z(α) R_y(β) R_z(γ)` and
//! `D^j_{m'm} = e^{−i m' α} d^j_{m'm}(β) e^{−i m γ}` with the usual factorial
//! sum for `d^j`. Only the half-sums `(α ± γ)/2` are read off the SU(2)
//! matrix, and `m' ± m` are integers, so the sign of the quaternion carries
//! through correctly for half-integer j.

use std::ops::Mul;
use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spin::rotation::Rotation;
use crate::spin::state::{Spin, MAX_TWICE_J};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

fn factorials() -> &'static [f64; 101] {
    static TABLE: OnceLock<[f64; 101]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0_f64; 101];
        for k in 1..=100 {
            t[k] = t[k - 1] * k as f64;
        }
        t
    })
}

/// Coefficients of the little-d sum, computed in f64 so that single
/// precision callers never see the (overflowing) raw factorials.
fn little_d_terms(twice_j: i32, twice_mp: i32, twice_m: i32) -> Vec<(f64, i32, i32)> {
    let f = factorials();
    let jpmp = ((twice_j + twice_mp) / 2) as usize;
    let jmmp = ((twice_j - twice_mp) / 2) as usize;
    let jpm = ((twice_j + twice_m) / 2) as usize;
    let jmm = ((twice_j - twice_m) / 2) as usize;
    let mp_minus_m = (twice_mp - twice_m) / 2;
    let root = (f[jpmp] * f[jmmp] * f[jpm] * f[jmm]).sqrt();

    let k_min = 0.max(-mp_minus_m);
    let k_max = (jpm as i32).min(jmmp as i32);
    let mut terms = Vec::new();
    for k in k_min..=k_max {
        let denom = f[(jpm as i32 - k) as usize]
            * f[k as usize]
            * f[(jmmp as i32 - k) as usize]
            * f[(k + mp_minus_m) as usize];
        let sign = if (k + mp_minus_m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let cos_pow = twice_j - 2 * k - mp_minus_m;
        let sin_pow = 2 * k + mp_minus_m;
        terms.push((sign * root / denom, cos_pow, sin_pow));
    }
    terms
}

/// `d^j_{m'm}(β)` given `cos(β/2)` and `sin(β/2)`.
fn little_d<T: Real>(twice_j: i32, twice_mp: i32, twice_m: i32, cos_half: T, sin_half: T) -> T {
    little_d_terms(twice_j, twice_mp, twice_m)
        .into_iter()
        .map(|(coef, cp, sp)| T::lit(coef) * cos_half.powi(cp) * sin_half.powi(sp))
        .sum()
}

/// The (2j+1)×(2j+1) unitary matrix of `r` in the |j, m⟩ basis.
pub fn wigner_d<T: Real>(spin: Spin, r: &Rotation<T>) -> Result<CMatrix<T>> {
    if spin.twice() == 0 || spin.twice() > MAX_TWICE_J {
        return Err(Error::UnsupportedSpin { twice_j: spin.twice() });
    }
    let u = r.matrix();
    let a = u[0][0]; // e^{−i(α+γ)/2} cos(β/2)
    let b = u[1][0]; // e^{+i(α−γ)/2} sin(β/2)
    let cos_half = a.norm();
    let sin_half = b.norm();
    let unit = |z: Complex<T>, n: T| {
        if n > T::zero() {
            z / n
        } else {
            Complex::new(T::one(), T::zero())
        }
    };
    // e^{−i(α+γ)/2} and e^{−i(α−γ)/2}
    let e_plus = unit(a, cos_half);
    let e_minus = unit(b, sin_half).conj();

    let tj = spin.twice() as i32;
    let n = spin.dim();
    let mut d = CMatrix::zeros(n);
    for row in 0..n {
        let twice_mp = spin.twice_m(row);
        for col in 0..n {
            let twice_m = spin.twice_m(col);
            let small = little_d(tj, twice_mp, twice_m, cos_half, sin_half);
            if small == T::zero() {
                continue;
            }
            let sum = (twice_mp + twice_m) / 2;
            let diff = (twice_mp - twice_m) / 2;
            let phase = e_plus.powi(sum) * e_minus.powi(diff);
            d[(row, col)] = phase * small;
        }
    }
    Ok(d)
}
