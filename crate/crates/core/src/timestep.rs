//! Two-level linearly implicit time stepping.
//!
//! Given `U^{n-1}`, each step solves two linear systems:
//!
//! ```text
//! [2/k M + i/2 (A - N(U^{n-1}))] U^{n-1/2} = [2/k M - i/2 (A - N(U^{n-1}))] U^{n-1} + G(t_{n-1})
//! [1/k M + i/2 (A - N(U^{n-1/2}))] U^n     = [1/k M - i/2 (A - N(U^{n-1/2}))] U^{n-1} + G(t_{n-1/2})
//! ```
//!
//! where `M`, `A` are the mass and stiffness matrices, `N(W)` the mass
//! matrix weighted by `f(|W|²)` and `G(t)` the load vector of `g(t, ·)`.
//! The starting value is the Ritz projection of `u₀`.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assembly::{assemble_load, assemble_mass, assemble_stiffness, assemble_weighted_mass};
use crate::error::{Error, Result};
use crate::fe::{FeSpace, FieldVector};
use crate::field::{Frozen, Partial, ScalarField};
use crate::linalg::BandedMatrix;
use crate::nonlinearity::Nonlinearity;
use crate::projection::ritz_project;
use crate::verification::norms::field_l2_norm;

/// Strictly increasing time nodes `0 = t_0 < t_1 < ... < t_N = T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    nodes: Vec<f64>,
}

impl TimeGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidTimeGrid("need at least one step".into()));
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidTimeGrid(format!("t_0 must be 0, got {}", nodes[0])));
        }
        if nodes.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidTimeGrid("non-finite node".into()));
        }
        if let Some(n) = nodes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTimeGrid(format!(
                "step {} has non-positive length",
                n + 1
            )));
        }
        Ok(TimeGrid { nodes })
    }

    pub fn uniform(final_time: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(final_time > 0.0) {
            return Err(Error::InvalidTimeGrid(format!(
                "need T > 0 and N >= 1, got T = {final_time}, N = {steps}"
            )));
        }
        let k = final_time / steps as f64;
        let mut nodes: Vec<f64> = (0..=steps).map(|n| n as f64 * k).collect();
        nodes[steps] = final_time;
        Self::new(nodes)
    }

    /// Uniform grid with interior nodes displaced by at most `jitter · T/N`.
    pub fn perturbed(final_time: f64, steps: usize, jitter: f64, seed: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&jitter) {
            return Err(Error::InvalidTimeGrid(format!(
                "jitter must lie in [0, 0.5), got {jitter}"
            )));
        }
        let mut grid = Self::uniform(final_time, steps)?;
        if jitter > 0.0 {
            let k = final_time / steps as f64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in &mut grid.nodes[1..steps] {
                *t += jitter * k * rng.gen_range(-1.0..=1.0);
            }
        }
        Self::new(grid.nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn final_time(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// `k_n = t_n − t_{n−1}` for `n` in `1..=N`.
    pub fn step(&self, n: usize) -> f64 {
        self.nodes[n] - self.nodes[n - 1]
    }

    pub fn midpoint(&self, n: usize) -> f64 {
        self.nodes[n - 1] + 0.5 * self.step(n)
    }

    /// `k = max k_n`.
    pub fn k_max(&self) -> f64 {
        (1..=self.steps()).map(|n| self.step(n)).fold(0.0, f64::max)
    }
}

/// Initial-boundary value problem on `(a, b) × (0, T]`.
#[derive(Clone)]
pub struct NlsProblem {
    pub domain: (f64, f64),
    pub final_time: f64,
    pub nonlinearity: Nonlinearity,
    pub forcing: Arc<dyn ScalarField>,
    /// Read at `t = 0`.
    pub initial: Arc<dyn ScalarField>,
    /// Exact solution, when known.
    pub exact: Option<Arc<dyn ScalarField>>,
}

impl std::fmt::Debug for NlsProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NlsProblem")
            .field("domain", &self.domain)
            .field("final_time", &self.final_time)
            .field("nonlinearity", &self.nonlinearity)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl NlsProblem {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        if !(a < b) {
            return Err(Error::InvalidProblem(format!("empty domain ({a}, {b})")));
        }
        if !(self.final_time > 0.0) {
            return Err(Error::InvalidProblem(format!("final time {} <= 0", self.final_time)));
        }
        for x in [a, b] {
            let v = self.initial.value(0.0, x);
            if v.norm() > 1e-12 {
                return Err(Error::InvalidProblem(format!("u0({x}) = {v} does not vanish")));
            }
        }
        if let Some(exact) = &self.exact {
            for i in 0..=32 {
                let x = a + (b - a) * i as f64 / 32.0;
                let d = (exact.value(0.0, x) - self.initial.value(0.0, x)).norm();
                if d > 1e-12 {
                    return Err(Error::InvalidProblem(format!(
                        "exact solution differs from u0 at x = {x} by {d:e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Same problem with `g ≡ 0` and no exact solution.
    pub fn without_forcing(&self) -> Self {
        NlsProblem {
            forcing: Arc::new(crate::field::ZeroField),
            exact: None,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    pub t: f64,
    /// `‖U^n‖_M`.
    pub l2_norm: f64,
    /// `‖g(t_{n−1/2}, ·)‖_{L2}`.
    pub g_l2: f64,
    /// Seconds spent in this step.
    pub wall_time: f64,
}

/// Holds the time-independent matrices of one FE space and performs steps.
#[derive(Clone, Debug)]
pub struct Stepper<'a> {
    space: &'a FeSpace,
    mass: BandedMatrix,
    stiffness: BandedMatrix,
    factorizations: usize,
    solves: usize,
}

impl<'a> Stepper<'a> {
    pub fn new(space: &'a FeSpace) -> Result<Self> {
        Ok(Stepper {
            space,
            mass: assemble_mass(space)?,
            stiffness: assemble_stiffness(space)?,
            factorizations: 0,
            solves: 0,
        })
    }

    pub fn space(&self) -> &FeSpace {
        self.space
    }

    pub fn mass(&self) -> &BandedMatrix {
        &self.mass
    }

    pub fn stiffness(&self) -> &BandedMatrix {
        &self.stiffness
    }

    pub fn factorizations(&self) -> usize {
        self.factorizations
    }

    pub fn solves(&self) -> usize {
        self.solves
    }

    /// `‖U‖_M = sqrt(U^H M U)`.
    pub fn mass_norm(&self, u: &FieldVector) -> Result<f64> {
        Ok(self.mass.quadratic_form(u)?.re.max(0.0).sqrt())
    }

    /// Solves `[s M + i/2 (A − N(W))] X = [s M − i/2 (A − N(W))] U + G(t_g)`.
    #[allow(clippy::too_many_arguments)]
    fn solve_step(
        &mut self,
        scale: f64,
        f: &Nonlinearity,
        g: &dyn ScalarField,
        weight_state: &FieldVector,
        prev: &FieldVector,
        t_g: f64,
        k: f64,
    ) -> Result<FieldVector> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("time step {k} must be positive")));
        }
        self.space.check(prev)?;
        let one = Complex64::new(1.0, 0.0);
        let half_i = Complex64::new(0.0, 0.5);
        let weighted = assemble_weighted_mass(self.space, weight_state, f)?;
        let shifted = self.stiffness.combine(one, &weighted, -one)?;
        let s = Complex64::new(scale, 0.0);
        let lhs = self.mass.combine(s, &shifted, half_i)?;
        let explicit = self.mass.combine(s, &shifted, -half_i)?;
        let mut rhs = explicit.matvec(prev)?;
        let load = assemble_load(self.space, g, t_g)?;
        rhs.iter_mut().zip(load.iter()).for_each(|(r, l)| *r += l);
        let lu = lhs.lu()?;
        self.factorizations += 1;
        let x = lu.solve(&rhs)?;
        self.solves += 1;
        Ok(x)
    }

    /// Predictor `U^{n−1/2}`, nonlinearity frozen at `U^{n−1}`, forcing at `t_{n−1}`.
    pub fn half_step(
        &mut self,
        f: &Nonlinearity,
        g: &dyn ScalarField,
        prev: &FieldVector,
        t_prev: f64,
        k: f64,
    ) -> Result<FieldVector> {
        self.solve_step(2.0 / k, f, g, prev, prev, t_prev, k)
    }

    /// Corrector `U^n`, nonlinearity at `U^{n−1/2}`, forcing at `t_{n−1/2}`.
    pub fn full_step(
        &mut self,
        f: &Nonlinearity,
        g: &dyn ScalarField,
        prev: &FieldVector,
        half: &FieldVector,
        t_prev: f64,
        k: f64,
    ) -> Result<FieldVector> {
        self.space.check(half)?;
        self.solve_step(1.0 / k, f, g, half, prev, t_prev + 0.5 * k, k)
    }
}

/// `U^0 = R_h u₀`.
pub fn initial_data(space: &FeSpace, problem: &NlsProblem) -> Result<FieldVector> {
    if !problem.initial.has_partial(Partial::X) {
        return Err(Error::MissingDerivative(Partial::X));
    }
    let u0 = Frozen {
        field: problem.initial.clone(),
        t0: 0.0,
    };
    ritz_project(space, &u0, 0.0)
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub initial: FieldVector,
    pub initial_norm: f64,
    pub final_state: FieldVector,
    /// One record per step `n = 1..=N`.
    pub records: Vec<StepRecord>,
    pub factorizations: usize,
    pub solves: usize,
}

impl RunOutput {
    /// `max_n |‖U^n‖_M − ‖U^0‖_M|`.
    pub fn mass_drift(&self) -> f64 {
        self.records
            .iter()
            .map(|r| (r.l2_norm - self.initial_norm).abs())
            .fold(0.0, f64::max)
    }
}

pub fn advance(space: &FeSpace, problem: &NlsProblem, grid: &TimeGrid) -> Result<RunOutput> {
    advance_with(space, problem, grid, |_, _, _| Ok(()))
}

/// Runs the scheme, calling `observer(n, t_n, U^n)` for `n = 0..=N`.
pub fn advance_with<F>(
    space: &FeSpace,
    problem: &NlsProblem,
    grid: &TimeGrid,
    mut observer: F,
) -> Result<RunOutput>
where
    F: FnMut(usize, f64, &FieldVector) -> Result<()>,
{
    problem.validate()?;
    let mesh = space.mesh();
    if mesh.a() != problem.domain.0 || mesh.b() != problem.domain.1 {
        return Err(Error::InvalidProblem(format!(
            "mesh spans ({}, {}) but the domain is {:?}",
            mesh.a(),
            mesh.b(),
            problem.domain
        )));
    }
    if (grid.final_time() - problem.final_time).abs() > 1e-12 * problem.final_time {
        return Err(Error::InvalidTimeGrid(format!(
            "grid ends at {} but T = {}",
            grid.final_time(),
            problem.final_time
        )));
    }
    let mut stepper = Stepper::new(space)?;
    let initial = initial_data(space, problem)?;
    let initial_norm = stepper.mass_norm(&initial)?;
    observer(0, 0.0, &initial)?;

    let f = &problem.nonlinearity;
    let g = problem.forcing.as_ref();
    let mut current = initial.clone();
    let mut records = Vec::with_capacity(grid.steps());
    for n in 1..=grid.steps() {
        let start = Instant::now();
        let t_prev = grid.nodes()[n - 1];
        let k = grid.step(n);
        let t = grid.nodes()[n];
        let step = (|| {
            let half = stepper.half_step(f, g, &current, t_prev, k)?;
            let next = stepper.full_step(f, g, &current, &half, t_prev, k)?;
            let g_l2 = field_l2_norm(space, g, grid.midpoint(n))?;
            Ok::<_, Error>((next, g_l2))
        })();
        let (next, g_l2) = step.map_err(|e| e.at_step(n, t))?;
        current = next;
        records.push(StepRecord {
            n,
            t,
            l2_norm: stepper.mass_norm(&current)?,
            g_l2,
            wall_time: start.elapsed().as_secs_f64(),
        });
        observer(n, t, &current).map_err(|e| e.at_step(n, t))?;
    }
    Ok(RunOutput {
        initial,
        initial_norm,
        final_state: current,
        records,
        factorizations: stepper.factorizations,
        solves: stepper.solves,
    })
}
