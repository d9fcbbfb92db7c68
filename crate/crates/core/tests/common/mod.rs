//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's rotation or representation code.
#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type M = Vec<Vec<C>>;

pub const Q: f64 = std::f64::consts::FRAC_1_SQRT_2;
pub const G: f64 = 180.0 * Q;

pub fn zeros(n: usize) -> M {
    vec![vec![C::new(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> M {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &M, b: &M) -> M {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &M, b: &M) -> M {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &M, k: C) -> M {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

pub fn adjoint(a: &M) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

/// Pauli matrices.
pub fn sigma() -> [M; 3] {
    let (o, l, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    [vec![vec![o, l], vec![l, o]], vec![vec![o, -i], vec![i, o]], vec![vec![l, o], vec![o, -l]]]
}

/// `w·I − i(x σx + y σy + z σz)`.
pub fn quat_matrix(q: [f64; 4]) -> M {
    let s = sigma();
    let mut m = scale(&eye(2), C::new(q[0], 0.0));
    for k in 0..3 {
        m = add(&m, &scale(&s[k], C::new(0.0, -q[k + 1])));
    }
    m
}

/// `exp(−i θ/2 n̂·σ)` in closed form.
pub fn su2(axis: [f64; 3], angle_deg: f64) -> M {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let h = angle_deg.to_radians() / 2.0;
    let n = axis.map(|a| a / norm);
    quat_matrix([h.cos(), h.sin() * n[0], h.sin() * n[1], h.sin() * n[2]])
}

/// Spin-j operators (Jx, Jy, Jz) in the basis m = j, j−1, …, −j.
pub fn spin_matrices(twice_j: u32) -> [M; 3] {
    let n = twice_j as usize + 1;
    let j = twice_j as f64 / 2.0;
    let m_of = |i: usize| j - i as f64;
    let mut jp = zeros(n);
    for i in 1..n {
        let m = m_of(i);
        jp[i - 1][i] = C::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = adjoint(&jp);
    let jx = scale(&add(&jp, &jm), C::new(0.5, 0.0));
    let jy = scale(&add(&jp, &scale(&jm, C::new(-1.0, 0.0))), C::new(0.0, -0.5));
    let mut jz = zeros(n);
    for i in 0..n {
        jz[i][i] = C::new(m_of(i), 0.0);
    }
    [jx, jy, jz]
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &M) -> M {
    let n = a.len();
    let norm = a.iter().map(|r| r.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let small = scale(a, C::new(0.5_f64.powi(squarings as i32), 0.0));
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..30 {
        term = scale(&matmul(&term, &small), C::new(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

/// `exp(−i θ n̂·J)` for spin j = twice_j/2.
pub fn rotation_rep(twice_j: u32, axis: [f64; 3], angle_deg: f64) -> M {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let js = spin_matrices(twice_j);
    let mut gen = zeros(twice_j as usize + 1);
    for k in 0..3 {
        gen = add(&gen, &scale(&js[k], C::new(axis[k] / norm, 0.0)));
    }
    expm(&scale(&gen, C::new(0.0, -angle_deg.to_radians())))
}

/// Coil precession with the default geometry: about (0, b, g) by |(0, b, g)| degrees.
pub fn coil(b: f64) -> M {
    su2([0.0, b, G], b.hypot(G))
}

type M2 = [[C; 2]; 2];

fn su2_fixed(axis: [f64; 3], angle_deg: f64) -> M2 {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let h = angle_deg.to_radians() / 2.0;
    let (c, s) = (h.cos(), h.sin() / norm);
    let (x, y, z) = (s * axis[0], s * axis[1], s * axis[2]);
    [[C::new(c, -z), C::new(-y, -x)], [C::new(y, -x), C::new(c, z)]]
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn arm(b1: f64, b2: f64) -> M2 {
    let coil = |b: f64| su2_fixed([0.0, b, G], b.hypot(G));
    mul2(&coil(b2), &coil(b1))
}

/// c(p) for |+z⟩ with the fixed arm at I = q(−180, 180), by 2×2 algebra.
pub fn c_oracle(b1: f64, b2: f64) -> C {
    let fixed = arm(-G, G);
    let var = arm(b1, b2);
    // ⟨+z| U_fixed† U_var |+z⟩
    fixed[0][0].conj() * var[0][0] + fixed[1][0].conj() * var[1][0]
}

/// Phase change along straight segments between `vertices`, summing
/// principal-value increments of the oracle over `steps` points per segment.
pub fn dense_total(vertices: &[(f64, f64)], steps: usize) -> f64 {
    let mut prev = c_oracle(vertices[0].0, vertices[0].1);
    let mut total = 0.0;
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        for k in 1..=steps {
            let t = k as f64 / steps as f64;
            let c = c_oracle(a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
            total += (c * prev.conj()).arg().to_degrees();
            prev = c;
        }
    }
    total
}

/// (arclength, unwrapped phase) along the polyline with `steps` points per segment.
pub fn dense_profile(vertices: &[(f64, f64)], steps: usize) -> Vec<(f64, f64)> {
    let mut prev = c_oracle(vertices[0].0, vertices[0].1);
    let mut out = vec![(0.0, prev.arg().to_degrees())];
    let mut s0 = 0.0;
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        for k in 1..=steps {
            let t = k as f64 / steps as f64;
            let c = c_oracle(a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
            let phase = out.last().unwrap().1 + (c * prev.conj()).arg().to_degrees();
            out.push((s0 + t * len, phase));
            prev = c;
        }
        s0 += len;
    }
    out
}
