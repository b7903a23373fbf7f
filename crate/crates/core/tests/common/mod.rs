//! Test-only oracles, written independently of the library's code paths.
#![allow(dead_code, clippy::needless_range_loop)]

use nls_fem::{BandedMatrix, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// Random banded matrix with a boosted diagonal so that it is safely nonsingular.
pub fn random_banded(rng: &mut impl Rng, n: usize, kl: usize, ku: usize) -> BandedMatrix {
    let mut a = BandedMatrix::zeros(n, kl, ku);
    for i in 0..n {
        for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
            a.set(i, j, random_complex(rng));
        }
        a.add(i, i, c(rng.gen_range(1.0..3.0) * (kl + ku + 1) as f64 / 2.0, 0.0));
    }
    a
}

pub fn dense_matvec(a: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(aij, xj)| aij * xj).sum())
        .collect()
}

/// Dense Gaussian elimination with partial pivoting on a copy of `a`.
pub fn dense_solve(a: &[Vec<Complex64>], b: &[Complex64]) -> Vec<Complex64> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))
            .unwrap();
        m.swap(k, p);
        x.swap(k, p);
        for i in k + 1..n {
            let l = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= l * v;
            }
            let v = x[k];
            x[i] -= l * v;
        }
    }
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (x[i] - s) / m[i][i];
    }
    x
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Closed-form P1 mass and stiffness on a uniform mesh with `m` elements of
/// length `h`, restricted to the `m − 1` interior hats.
pub fn dense_p1_matrices(m: usize, h: f64) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let n = m - 1;
    let mut mass = vec![vec![c(0.0, 0.0); n]; n];
    let mut stiff = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        mass[i][i] = c(2.0 * h / 3.0, 0.0);
        stiff[i][i] = c(2.0 / h, 0.0);
        if i + 1 < n {
            mass[i][i + 1] = c(h / 6.0, 0.0);
            mass[i + 1][i] = c(h / 6.0, 0.0);
            stiff[i][i + 1] = c(-1.0 / h, 0.0);
            stiff[i + 1][i] = c(-1.0 / h, 0.0);
        }
    }
    (mass, stiff)
}

/// One dense Crank–Nicolson step of the free equation `u_t = i u_xx` in
/// Galerkin form: `(M/k + i/2 A) u1 = (M/k − i/2 A) u0`.
pub fn dense_cn_step(mass: &[Vec<Complex64>], stiff: &[Vec<Complex64>], u0: &[Complex64], k: f64) -> Vec<Complex64> {
    let n = u0.len();
    let half_i = c(0.0, 0.5);
    let lhs: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| mass[i][j] / k + half_i * stiff[i][j]).collect())
        .collect();
    let rhs_mat: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| mass[i][j] / k - half_i * stiff[i][j]).collect())
        .collect();
    dense_solve(&lhs, &dense_matvec(&rhs_mat, u0))
}

/// P1 Ritz projection on a uniform mesh: `(v', φ_j') = (2v(x_j) − v(x_{j−1}) − v(x_{j+1}))/h`
/// exactly, so the projection solves the closed-form stiffness system.
pub fn dense_p1_ritz(m: usize, h: f64, v: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    let (_, stiff) = dense_p1_matrices(m, h);
    let b: Vec<Complex64> = (1..m)
        .map(|j| {
            let x = j as f64 * h;
            (2.0 * v(x) - v(x - h) - v(x + h)) / h
        })
        .collect();
    dense_solve(&stiff, &b)
}

/// Log2 ratios of successive errors under halving.
pub fn halving_rates(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
