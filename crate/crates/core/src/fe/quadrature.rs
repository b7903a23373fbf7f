use crate::error::{Error, Result};

pub const MAX_QUADRATURE_POINTS: usize = 8;

/// Quadrature rule on the reference interval [-1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct QuadRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integrates `f` over `[lo, hi]` through the affine map from [-1, 1].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.iter().map(|(xi, w)| w * f(mid + half * xi)).sum::<f64>() * half
    }
}

/// Legendre polynomial P_q and its derivative at `x`.
fn legendre(q: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=q {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    let dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `q`-point Gauss–Legendre rule, exact for polynomials of degree `2q - 1`.
pub fn gauss_rule(q: usize) -> Result<QuadRule> {
    if !(1..=MAX_QUADRATURE_POINTS).contains(&q) {
        return Err(Error::UnsupportedQuadrature(q));
    }
    if q == 1 {
        return Ok(QuadRule {
            points: vec![0.0],
            weights: vec![2.0],
        });
    }
    let mut points = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let qf = q as f64;
    for i in 0..q.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_q.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (qf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(q, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(q, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        points[q / 2] = 0.0;
    }
    Ok(QuadRule { points, weights })
}
