//! Locating the zeros of c in a window of the (b1y, b2y) plane and
//! assigning each its topological charge.
//!
//! |c| is sampled on a grid; every local minimum below [`SEED_THRESHOLD`]
//! seeds a damped Newton solve of (Re c, Im c) = 0 with a finite-difference
//! Jacobian. When Newton fails, the seed cell is quadrisected, always keeping
//! a sub-square with nonzero boundary winding. Charges are the winding of
//! arg c around a small square, so they follow the same orientation
//! convention as [`crate::phase::winding_number`].

use num_complex::Complex;
use rayon::prelude::*;

use crate::apparatus::{ApparatusConfig, CoilModel, ParameterPoint};
use crate::error::{Error, Result};
use crate::phase::{winding_of_field, ParameterPath, Refinement};
use crate::scalar::Real;
use crate::spin::SINGULAR_CONTRAST;

pub const SEED_THRESHOLD: f64 = 0.2;
pub const MERGE_RADIUS: f64 = 1e-6;
pub const MAX_NEWTON_ITERATIONS: usize = 200;
pub const MIN_GRID: usize = 16;
pub const DEFAULT_GRID: usize = 128;

const CHARGE_LOOP_MIN_HALF_WIDTH: f64 = 1e-3;
const CHARGE_LOOP_STEPS: usize = 16;
const QUADRISECTION_LEVELS: usize = 48;

/// Axis-aligned window `[b1_min, b1_max] × [b2_min, b2_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub b1_min: T,
    pub b1_max: T,
    pub b2_min: T,
    pub b2_max: T,
}

impl<T: Real> Rect<T> {
    pub fn new(b1_min: T, b1_max: T, b2_min: T, b2_max: T) -> Result<Self> {
        let all_finite = [b1_min, b1_max, b2_min, b2_max].iter().all(|v| v.is_finite());
        if !all_finite || !(b1_min < b1_max) || !(b2_min < b2_max) {
            return Err(Error::InvalidArgument("rectangle must be finite and non-degenerate".into()));
        }
        Ok(Self { b1_min, b1_max, b2_min, b2_max })
    }

    pub fn square(half_width: T) -> Result<Self> {
        Self::new(-half_width, half_width, -half_width, half_width)
    }

    pub fn contains(&self, p: &ParameterPoint<T>) -> bool {
        p.b1y >= self.b1_min && p.b1y <= self.b1_max && p.b2y >= self.b2_min && p.b2y <= self.b2_max
    }

    pub fn boundary(&self, steps_per_segment: usize) -> Result<ParameterPath<T>> {
        ParameterPath::rectangle(self.b1_min, self.b1_max, self.b2_min, self.b2_max, steps_per_segment)
    }
}

/// A zero of c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity<T> {
    pub location: ParameterPoint<T>,
    /// Topological strength; for unresolved candidates, the winding around
    /// the seed cell.
    pub charge: i64,
    pub localization_radius: T,
    /// Refinement did not reach |c| below the contrast floor.
    pub unresolved: bool,
}

enum Refined<T> {
    Zero { at: ParameterPoint<T>, radius: T },
    Unresolved { at: ParameterPoint<T> },
}

struct Solver<'a, T: Real> {
    model: &'a CoilModel<T>,
    spacing: T,
    tolerance: T,
}

impl<'a, T: Real> Solver<'a, T> {
    fn c(&self, p: &ParameterPoint<T>) -> Complex<T> {
        self.model.value(p)
    }

    /// Central-difference Jacobian of (Re c, Im c) with respect to (b1y, b2y).
    fn jacobian(&self, p: &ParameterPoint<T>) -> [[T; 2]; 2] {
        let h = T::lit(1e-5);
        let two_h = h + h;
        let d1 = (self.c(&ParameterPoint::new(p.b1y + h, p.b2y)) - self.c(&ParameterPoint::new(p.b1y - h, p.b2y)))
            / two_h;
        let d2 = (self.c(&ParameterPoint::new(p.b1y, p.b2y + h)) - self.c(&ParameterPoint::new(p.b1y, p.b2y - h)))
            / two_h;
        [[d1.re, d2.re], [d1.im, d2.im]]
    }

    /// Uncertainty of a located zero: |c| over the smallest singular value of J.
    fn radius(&self, p: &ParameterPoint<T>) -> T {
        let j = self.jacobian(p);
        let (a, b, c, d) = (j[0][0], j[0][1], j[1][0], j[1][1]);
        let frob2 = a * a + b * b + c * c + d * d;
        let det = (a * d - b * c).abs();
        let disc = (frob2 * frob2 - T::lit(4.0) * det * det).max(T::zero()).sqrt();
        let sigma_min = ((frob2 - disc) / T::lit(2.0)).max(T::zero()).sqrt();
        let floor = T::epsilon() * p.b1y.abs().max(p.b2y.abs()).max(T::one());
        if sigma_min > T::zero() {
            (self.c(p).norm() / sigma_min).max(floor)
        } else {
            floor
        }
    }

    fn newton(&self, seed: ParameterPoint<T>) -> Option<ParameterPoint<T>> {
        let max_step = self.spacing * T::lit(2.0);
        let leash = self.spacing * T::lit(4.0);
        let mut p = seed;
        let mut value = self.c(&p);
        // Past the tolerance, keep polishing until a step no longer helps;
        // higher-order zeros converge only linearly.
        for _ in 0..MAX_NEWTON_ITERATIONS {
            if value.norm() == T::zero() {
                break;
            }
            let j = self.jacobian(&p);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == T::zero() || !det.is_finite() {
                break;
            }
            let mut dx = -(j[1][1] * value.re - j[0][1] * value.im) / det;
            let mut dy = -(-j[1][0] * value.re + j[0][0] * value.im) / det;
            let len = dx.hypot(dy);
            if len > max_step {
                dx = dx * max_step / len;
                dy = dy * max_step / len;
            }
            let mut t = T::one();
            let mut accepted = None;
            while t > T::lit(1e-4) {
                let trial = ParameterPoint::new(p.b1y + t * dx, p.b2y + t * dy);
                let v = self.c(&trial);
                if v.norm() < value.norm() {
                    accepted = Some((trial, v));
                    break;
                }
                t = t / T::lit(2.0);
            }
            match accepted {
                Some((trial, v)) => {
                    p = trial;
                    value = v;
                }
                None => break,
            }
            if p.distance(&seed) > leash {
                return None;
            }
        }
        (value.norm() < self.tolerance).then_some(p)
    }

    fn cell_winding(&self, center: ParameterPoint<T>, half_width: T) -> std::result::Result<i64, ParameterPoint<T>> {
        let path = ParameterPath::square(center, half_width, 8).map_err(|_| center)?;
        match winding_of_field(&path, |p| self.c(p), &Refinement::default()) {
            Ok(w) => Ok(w),
            Err(Error::Singular { b1y, b2y }) => Err(ParameterPoint::new(T::lit(b1y), T::lit(b2y))),
            Err(_) => Err(center),
        }
    }

    fn quadrisect(&self, seed: ParameterPoint<T>) -> Refined<T> {
        let mut center = seed;
        let mut half = self.spacing;
        match self.cell_winding(center, half) {
            Ok(0) => return Refined::Unresolved { at: seed },
            Ok(_) => {}
            Err(hit) => return self.finish(hit, seed),
        }
        'levels: for _ in 0..QUADRISECTION_LEVELS {
            half = half / T::lit(2.0);
            for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                let sub = ParameterPoint::new(center.b1y + T::lit(sx) * half, center.b2y + T::lit(sy) * half);
                match self.cell_winding(sub, half) {
                    Ok(0) => continue,
                    Ok(_) => {
                        center = sub;
                        continue 'levels;
                    }
                    Err(hit) => return self.finish(hit, seed),
                }
            }
            break;
        }
        self.finish(center, seed)
    }

    fn finish(&self, near: ParameterPoint<T>, seed: ParameterPoint<T>) -> Refined<T> {
        if self.c(&near).norm() < self.tolerance {
            return Refined::Zero { at: near, radius: self.radius(&near) };
        }
        match self.newton(near) {
            Some(p) => Refined::Zero { at: p, radius: self.radius(&p) },
            None => Refined::Unresolved { at: seed },
        }
    }

    fn refine(&self, seed: ParameterPoint<T>) -> Refined<T> {
        match self.newton(seed) {
            Some(p) => Refined::Zero { at: p, radius: self.radius(&p) },
            None => self.quadrisect(seed),
        }
    }

    /// Winding on a small square around `at`, grown if the square itself
    /// touches the (possibly flat-bottomed) zero.
    fn charge(&self, at: ParameterPoint<T>, radius: T) -> Result<i64> {
        let mut half = T::lit(CHARGE_LOOP_MIN_HALF_WIDTH).max(radius * T::lit(2.0));
        let mut attempts = 0;
        loop {
            let path = ParameterPath::square(at, half, CHARGE_LOOP_STEPS)?;
            match winding_of_field(&path, |p| self.c(p), &Refinement::default()) {
                Err(Error::Singular { .. }) if attempts < 4 => {
                    half = half * T::lit(4.0);
                    attempts += 1;
                }
                other => return other,
            }
        }
    }
}

/// Sampled |c| on a `grid_n × grid_n` lattice spanning `rect` (edges included).
pub fn contrast_grid<T: Real>(rect: &Rect<T>, grid_n: usize, model: &CoilModel<T>) -> Vec<Vec<T>> {
    let axis = |lo: T, hi: T, i: usize| lo + (hi - lo) * T::lit(i as f64) / T::lit((grid_n - 1) as f64);
    (0..grid_n)
        .into_par_iter()
        .map(|row| {
            let b2 = axis(rect.b2_min, rect.b2_max, row);
            (0..grid_n)
                .map(|col| model.value(&ParameterPoint::new(axis(rect.b1_min, rect.b1_max, col), b2)).norm())
                .collect()
        })
        .collect()
}

/// All zeros of c inside `rect`, sorted by (b1y, b2y).
pub fn find_singularities<T: Real>(
    rect: &Rect<T>,
    grid_n: usize,
    config: &ApparatusConfig<T>,
) -> Result<Vec<Singularity<T>>> {
    if grid_n < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid must be at least {MIN_GRID}, got {grid_n}")));
    }
    let model = CoilModel::new(config)?;
    let grid = contrast_grid(rect, grid_n, &model);
    let step1 = (rect.b1_max - rect.b1_min) / T::lit((grid_n - 1) as f64);
    let step2 = (rect.b2_max - rect.b2_min) / T::lit((grid_n - 1) as f64);

    let threshold = T::lit(SEED_THRESHOLD);
    let mut seeds = Vec::new();
    for row in 0..grid_n {
        for col in 0..grid_n {
            let v = grid[row][col];
            if !(v < threshold) {
                continue;
            }
            let is_min = (row.saturating_sub(1)..=(row + 1).min(grid_n - 1))
                .all(|r| (col.saturating_sub(1)..=(col + 1).min(grid_n - 1)).all(|c| grid[r][c] >= v));
            if is_min {
                let on_edge = row == 0 || col == 0 || row == grid_n - 1 || col == grid_n - 1;
                seeds.push((
                    ParameterPoint::new(rect.b1_min + step1 * T::lit(col as f64), rect.b2_min + step2 * T::lit(row as f64)),
                    on_edge,
                ));
            }
        }
    }

    let solver = Solver { model: &model, spacing: step1.max(step2), tolerance: T::lit(SINGULAR_CONTRAST) };
    let refined: Vec<(Refined<T>, bool)> = seeds.par_iter().map(|&(s, edge)| (solver.refine(s), edge)).collect();

    let merge = T::lit(MERGE_RADIUS);
    let mut zeros: Vec<(ParameterPoint<T>, T)> = Vec::new();
    let mut unresolved: Vec<ParameterPoint<T>> = Vec::new();
    for (r, on_edge) in refined {
        match r {
            Refined::Zero { at, radius } => {
                if rect.contains(&at) && zeros.iter().all(|(z, _)| z.distance(&at) > merge) {
                    zeros.push((at, radius));
                }
            }
            // An edge minimum without winding is |c| still falling towards a
            // zero outside the window.
            Refined::Unresolved { at } if on_edge && solver.cell_winding(at, solver.spacing) == Ok(0) => {}
            Refined::Unresolved { at } => unresolved.push(at),
        }
    }
    // A stalled seed next to a zero found from another seed is the same zero.
    unresolved.retain(|u| zeros.iter().all(|(z, _)| z.distance(u) > solver.spacing * T::lit(2.0)));

    let mut out = Vec::with_capacity(zeros.len() + unresolved.len());
    for (at, radius) in zeros {
        let charge = solver.charge(at, radius)?;
        out.push(Singularity { location: at, charge, localization_radius: radius, unresolved: false });
    }
    for at in unresolved {
        let charge = solver.cell_winding(at, solver.spacing).unwrap_or(0);
        out.push(Singularity { location: at, charge, localization_radius: solver.spacing, unresolved: true });
    }
    out.sort_by(|a, b| {
        a.location
            .b1y
            .partial_cmp(&b.location.b1y)
            .expect("finite")
            .then(a.location.b2y.partial_cmp(&b.location.b2y).expect("finite"))
    });
    Ok(out)
}

/// Net charge inside `rect`, computed both from the boundary winding and
/// from the located zeros; the two must agree.
pub fn charge_sum<T: Real>(rect: &Rect<T>, config: &ApparatusConfig<T>) -> Result<i64> {
    charge_sum_with(rect, DEFAULT_GRID, config)
}

pub fn charge_sum_with<T: Real>(rect: &Rect<T>, grid_n: usize, config: &ApparatusConfig<T>) -> Result<i64> {
    let boundary = crate::phase::winding_number(&rect.boundary(crate::phase::DEFAULT_STEPS_PER_SEGMENT)?, config)?;
    let interior: i64 = find_singularities(rect, grid_n, config)?.iter().map(|s| s.charge).sum();
    if boundary != interior {
        return Err(Error::Consistency(format!(
            "boundary winding {boundary} differs from interior charge sum {interior}"
        )));
    }
    Ok(boundary)
}
