//! Banded complex matrices and their partial-pivoting LU factorization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fe::FieldVector;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pivots smaller than this in magnitude are treated as exact zeros.
pub const SINGULAR_PIVOT: f64 = 1e-300;

/// Square matrix with `kl` sub- and `ku` super-diagonals, stored row-wise:
/// row `i` holds columns `i - kl ..= i + ku`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Complex64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix {
            n,
            kl,
            ku,
            data: vec![ZERO; n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize, kl: usize, ku: usize) -> Self {
        let mut a = Self::zeros(n, kl, ku);
        for i in 0..n {
            a.set(i, i, Complex64::new(1.0, 0.0));
        }
        a
    }

    /// Copies the band of a dense row-major matrix; entries outside it are dropped.
    pub fn from_dense(dense: &[Vec<Complex64>], kl: usize, ku: usize) -> Self {
        let n = dense.len();
        let mut a = Self::zeros(n, kl, ku);
        for (i, row) in dense.iter().enumerate() {
            for j in a.row_range(i) {
                a.set(i, j, row[j]);
            }
        }
        a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kl(&self) -> usize {
        self.kl
    }

    pub fn ku(&self) -> usize {
        self.ku
    }

    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    /// Columns stored for row `i`, clipped to the matrix.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        i * self.width() + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i < self.n && j < self.n && self.in_band(i, j) {
            self.data[self.offset(i, j)]
        } else {
            ZERO
        }
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(self.in_band(i, j) && i < self.n && j < self.n, "({i}, {j}) outside band");
        let o = self.offset(i, j);
        self.data[o] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(self.in_band(i, j) && i < self.n && j < self.n, "({i}, {j}) outside band");
        let o = self.offset(i, j);
        self.data[o] += v;
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn same_shape(&self, other: &BandedMatrix) -> Result<()> {
        if self.n != other.n || self.kl != other.kl || self.ku != other.ku {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(())
    }

    /// `alpha * self + beta * other`, both with the same band shape.
    pub fn combine(&self, alpha: Complex64, other: &BandedMatrix, beta: Complex64) -> Result<BandedMatrix> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(BandedMatrix { data, ..*self })
    }

    pub fn scale(&self, alpha: Complex64) -> BandedMatrix {
        BandedMatrix {
            data: self.data.iter().map(|a| alpha * a).collect(),
            ..*self
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<FieldVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        let y = (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.data[self.offset(i, j)] * x[j]).sum())
            .collect();
        Ok(FieldVector::new(y))
    }

    /// `x^H A x`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Result<Complex64> {
        let ax = self.matvec(x)?;
        Ok(x.iter().zip(ax.iter()).map(|(xi, yi)| xi.conj() * yi).sum())
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn lu(&self) -> Result<BandedLu> {
        BandedLu::factor(self)
    }
}

/// `P A = L U` with row pivoting restricted to the band. `U` gains `kl`
/// extra super-diagonals of fill.
#[derive(Clone, Debug)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    /// Row `i` holds columns `i - kl ..= i + ku + kl`.
    upper: Vec<Complex64>,
    upper_width: usize,
    ku_fill: usize,
    /// Multipliers of step `k` for rows `k + 1 ..= k + kl`.
    lower: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn factor(a: &BandedMatrix) -> Result<Self> {
        let n = a.n;
        let kl = a.kl;
        let ku_fill = a.ku + a.kl;
        let w = kl + ku_fill + 1;
        let mut upper = vec![ZERO; n * w];
        let idx = |i: usize, j: usize| i * w + (j + kl - i);
        for i in 0..n {
            for j in a.row_range(i) {
                upper[idx(i, j)] = a.get(i, j);
            }
        }
        let mut lower = vec![ZERO; n * kl];
        let mut pivots = vec![0; n];

        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + ku_fill).min(n - 1);
            let (mut p, mut best) = (k, upper[idx(k, k)].norm());
            for r in k + 1..=last_row {
                let mag = upper[idx(r, k)].norm();
                if mag > best {
                    p = r;
                    best = mag;
                }
            }
            if !(best >= SINGULAR_PIVOT) {
                return Err(Error::SingularMatrix {
                    pivot: k,
                    magnitude: best,
                });
            }
            pivots[k] = p;
            if p != k {
                for c in k..=last_col {
                    upper.swap(idx(k, c), idx(p, c));
                }
            }
            let diag = upper[idx(k, k)];
            for r in k + 1..=last_row {
                let l = upper[idx(r, k)] / diag;
                lower[k * kl + (r - k - 1)] = l;
                upper[idx(r, k)] = ZERO;
                if l != ZERO {
                    for c in k + 1..=last_col {
                        let u = upper[idx(k, c)];
                        upper[idx(r, c)] -= l * u;
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            upper,
            upper_width: w,
            ku_fill,
            lower,
            pivots,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<FieldVector> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: b.len(),
            });
        }
        let n = self.n;
        let kl = self.kl;
        let w = self.upper_width;
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for r in k + 1..=(k + kl).min(n - 1) {
                x[r] -= self.lower[k * kl + (r - k - 1)] * xk;
            }
        }
        for i in (0..n).rev() {
            let row = &self.upper[i * w..(i + 1) * w];
            let mut s = x[i];
            for c in i + 1..=(i + self.ku_fill).min(n - 1) {
                s -= row[c + kl - i] * x[c];
            }
            x[i] = s / row[kl];
        }
        Ok(FieldVector::new(x))
    }
}
