use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound on `h_max / h_min` accepted unless a mesh is built with an explicit one.
pub const DEFAULT_QUASI_UNIFORMITY: f64 = 10.0;

/// Partition `a = x_0 < x_1 < ... < x_m = b` of an interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    gamma: f64,
}

impl Mesh1D {
    /// Builds a mesh from element boundaries, validating monotonicity and
    /// `h_max / h_min <= gamma`.
    pub fn from_nodes(nodes: Vec<f64>, gamma: f64) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least 2 elements, got {}",
                nodes.len().saturating_sub(1)
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite node".into()));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh(format!(
                "nodes not strictly increasing at index {}",
                i + 1
            )));
        }
        if !(gamma >= 1.0) {
            return Err(Error::InvalidMesh(format!("quasi-uniformity bound {gamma} < 1")));
        }
        let mesh = Mesh1D { nodes, gamma };
        let ratio = mesh.quasi_uniformity();
        if ratio > gamma {
            return Err(Error::InvalidMesh(format!(
                "h_max/h_min = {ratio} exceeds bound {gamma}"
            )));
        }
        Ok(mesh)
    }

    pub fn a(&self) -> f64 {
        self.nodes[0]
    }

    pub fn b(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of elements.
    pub fn m(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    pub fn element_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.windows(2).map(|w| w[1] - w[0])
    }

    /// Largest element length.
    pub fn h(&self) -> f64 {
        self.element_lengths().fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        self.element_lengths().fold(f64::INFINITY, f64::min)
    }

    pub fn quasi_uniformity(&self) -> f64 {
        self.h() / self.h_min()
    }

    /// Index of the element containing `x` (right-closed on the last one).
    pub fn locate(&self, x: f64) -> Option<usize> {
        if x < self.a() || x > self.b() {
            return None;
        }
        let idx = self.nodes.partition_point(|&n| n <= x);
        Some(idx.saturating_sub(1).min(self.m() - 1))
    }
}

pub fn build_uniform_mesh(a: f64, b: f64, m: usize) -> Result<Mesh1D> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidMesh(format!("need a < b, got a = {a}, b = {b}")));
    }
    if m < 2 {
        return Err(Error::InvalidMesh(format!("need m >= 2, got {m}")));
    }
    let h = (b - a) / m as f64;
    let mut nodes: Vec<f64> = (0..=m).map(|i| a + i as f64 * h).collect();
    nodes[m] = b;
    Mesh1D::from_nodes(nodes, DEFAULT_QUASI_UNIFORMITY)
}

/// Uniform mesh whose interior nodes are displaced by at most
/// `jitter * (b - a) / m`, drawn from a ChaCha8 stream seeded with `rng_seed`.
pub fn build_perturbed_mesh(a: f64, b: f64, m: usize, jitter: f64, rng_seed: u64) -> Result<Mesh1D> {
    if !(0.0..0.5).contains(&jitter) {
        return Err(Error::InvalidMesh(format!("jitter must lie in [0, 0.5), got {jitter}")));
    }
    let uniform = build_uniform_mesh(a, b, m)?;
    if jitter == 0.0 {
        return Ok(uniform);
    }
    let h = (b - a) / m as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut nodes = uniform.nodes;
    for x in &mut nodes[1..m] {
        *x += jitter * h * rng.gen_range(-1.0..=1.0);
    }
    Mesh1D::from_nodes(nodes, DEFAULT_QUASI_UNIFORMITY)
}
