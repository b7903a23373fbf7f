use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cases::ManufacturedCase;
use super::norms::{error_h1, error_l2};
use crate::error::{Error, Result};
use crate::fe::{build_uniform_mesh, FeSpace};
use crate::timestep::{advance_with, TimeGrid};

/// How the number of time steps follows the mesh under refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// `k ∝ h`.
    KPropH,
    /// `k ∝ h^{r/2}` with `r = p + 1`, so that `k²` balances `h^r`.
    KPropHR2,
}

impl Coupling {
    pub fn exponent(self, degree: usize) -> f64 {
        match self {
            Coupling::KPropH => 1.0,
            Coupling::KPropHR2 => (degree as f64 + 1.0) / 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    pub degrees: Vec<usize>,
    pub levels: usize,
    /// Element count of the coarsest level; level `ℓ` uses `m0 · 2^ℓ`.
    pub m0: usize,
    pub coupling: Coupling,
    /// `N = ceil(steps_factor · T / h^e)` with `e` the coupling exponent.
    pub steps_factor: f64,
    /// Jitter of the interior time nodes, as a fraction of the uniform step.
    pub time_jitter: f64,
    pub seed: u64,
    /// Measure `max_n` of the errors instead of the final-time value.
    pub max_over_steps: bool,
    /// Worker threads for independent levels; `None` means one per level.
    pub threads: Option<usize>,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            degrees: vec![1],
            levels: 4,
            m0: 8,
            coupling: Coupling::KPropH,
            steps_factor: 1.0,
            time_jitter: 0.0,
            seed: 0,
            max_over_steps: false,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EocLevel {
    pub m: usize,
    pub steps: usize,
    pub h: f64,
    pub k: f64,
    pub err_l2: f64,
    pub err_h1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EocReport {
    pub case: String,
    pub degree: usize,
    pub coupling: Coupling,
    pub levels: Vec<EocLevel>,
    /// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` for successive levels.
    pub rates_l2: Vec<f64>,
    pub rates_h1: Vec<f64>,
}

fn rates(levels: &[EocLevel], err: impl Fn(&EocLevel) -> f64) -> Vec<f64> {
    levels
        .windows(2)
        .map(|w| (err(&w[0]) / err(&w[1])).ln() / (w[0].h / w[1].h).ln())
        .collect()
}

/// Median of the rates, leaving out the coarsest pair when more than one exists.
pub fn median_rate(rates: &[f64]) -> Option<f64> {
    let used = if rates.len() > 1 { &rates[1..] } else { rates };
    if used.is_empty() {
        return None;
    }
    let mut v = used.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

impl EocReport {
    pub fn from_levels(case: &str, degree: usize, coupling: Coupling, levels: Vec<EocLevel>) -> Self {
        EocReport {
            case: case.to_string(),
            degree,
            coupling,
            rates_l2: rates(&levels, |l| l.err_l2),
            rates_h1: rates(&levels, |l| l.err_h1),
            levels,
        }
    }

    pub fn median_rate_l2(&self) -> Option<f64> {
        median_rate(&self.rates_l2)
    }

    pub fn median_rate_h1(&self) -> Option<f64> {
        median_rate(&self.rates_h1)
    }
}

pub fn steps_for(case: &ManufacturedCase, m: usize, degree: usize, opts: &StudyOptions) -> usize {
    let (a, b) = case.problem.domain;
    let h = (b - a) / m as f64;
    let n = opts.steps_factor * case.problem.final_time / h.powf(opts.coupling.exponent(degree));
    ((n - 1e-9).ceil() as usize).max(1)
}

fn run_level(case: &ManufacturedCase, degree: usize, level: usize, opts: &StudyOptions) -> Result<EocLevel> {
    let p = &case.problem;
    let m = opts.m0 << level;
    let steps = steps_for(case, m, degree, opts);
    let mesh = build_uniform_mesh(p.domain.0, p.domain.1, m)?;
    let space = FeSpace::new(mesh, degree)?;
    let grid = TimeGrid::perturbed(p.final_time, steps, opts.time_jitter, opts.seed.wrapping_add(level as u64))?;
    let exact = case.exact().as_ref();
    let (mut err_l2, mut err_h1) = (0.0f64, 0.0f64);
    advance_with(&space, p, &grid, |n, t, u| {
        if opts.max_over_steps || n == grid.steps() {
            err_l2 = err_l2.max(error_l2(&space, u, exact, t)?);
            err_h1 = err_h1.max(error_h1(&space, u, exact, t)?);
        }
        Ok(())
    })?;
    Ok(EocLevel {
        m,
        steps,
        h: space.mesh().h(),
        k: grid.k_max(),
        err_l2,
        err_h1,
    })
}

/// Runs the case on meshes `m0 · 2^ℓ`, `ℓ = 0..levels`, for every degree.
/// Levels are independent and run in parallel; results are ordered by
/// (degree, level).
pub fn convergence_study(case: &ManufacturedCase, opts: &StudyOptions) -> Result<Vec<EocReport>> {
    if opts.levels < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 levels, got {}", opts.levels)));
    }
    if opts.m0 < 2 {
        return Err(Error::InvalidArgument(format!("m0 must be >= 2, got {}", opts.m0)));
    }
    if !(opts.steps_factor > 0.0) {
        return Err(Error::InvalidArgument("steps_factor must be positive".into()));
    }
    if case.problem.exact.is_none() {
        return Err(Error::InvalidProblem("convergence study needs an exact solution".into()));
    }
    if let Some(&p) = opts.degrees.iter().find(|&&p| !(1..=3).contains(&p)) {
        return Err(Error::UnsupportedDegree(p));
    }
    let jobs: Vec<(usize, usize)> = opts
        .degrees
        .iter()
        .flat_map(|&p| (0..opts.levels).map(move |l| (p, l)))
        .collect();
    let threads = opts.threads.unwrap_or(opts.levels).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<Result<EocLevel>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, l)| run_level(case, p, l, opts).map_err(|e| e.at_level(l, opts.m0 << l)))
            .collect()
    });
    let mut results = results.into_iter();
    opts.degrees
        .iter()
        .map(|&p| {
            let levels = results.by_ref().take(opts.levels).collect::<Result<Vec<_>>>()?;
            Ok(EocReport::from_levels(&case.name, p, opts.coupling, levels))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verification::builtin_case;

    #[test]
    fn median_skips_coarsest_pair() {
        assert_eq!(median_rate(&[0.1, 2.0, 1.0, 3.0]), Some(2.0));
        assert_eq!(median_rate(&[0.1, 2.0, 1.0]), Some(1.5));
        assert_eq!(median_rate(&[0.5]), Some(0.5));
        assert_eq!(median_rate(&[]), None);
    }

    #[test]
    fn rate_formula() {
        let lv = |h: f64, e: f64| EocLevel { m: 0, steps: 0, h, k: h, err_l2: e, err_h1: e };
        let r = EocReport::from_levels("x", 1, Coupling::KPropH, vec![lv(0.1, 1e-2), lv(0.05, 2.5e-3)]);
        assert!((r.rates_l2[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn step_counts() {
        let case = builtin_case("ms1").unwrap();
        let mut o = StudyOptions::default();
        assert_eq!(steps_for(&case, 16, 1, &o), 16);
        o.coupling = Coupling::KPropHR2;
        assert_eq!(steps_for(&case, 16, 2, &o), 64);
        assert_eq!(steps_for(&case, 8, 2, &o), 23);
    }

    #[test]
    fn rejects_too_few_levels() {
        let case = builtin_case("ms1").unwrap();
        let o = StudyOptions { levels: 2, ..Default::default() };
        assert!(convergence_study(&case, &o).is_err());
    }

    #[test]
    fn errors_decrease_for_builtins() {
        for name in ["ms1", "free1"] {
            let case = builtin_case(name).unwrap();
            let o = StudyOptions { levels: 3, m0: 4, ..Default::default() };
            let r = &convergence_study(&case, &o).unwrap()[0];
            for w in r.levels.windows(2) {
                assert!(w[1].err_l2 < w[0].err_l2, "{name}");
                assert!(w[1].err_h1 < w[0].err_h1, "{name}");
            }
        }
    }
}
