use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verification::{builtin_case, standing_wave_case, Coupling, ManufacturedCase, BUILTIN_CASES};

/// Standing-wave manufactured problem given by its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineCase {
    pub domain: [f64; 2],
    pub lambda: f64,
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default = "default_final_time")]
    pub final_time: f64,
}

fn default_omega() -> f64 {
    1.0
}

fn default_final_time() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseSpec {
    Named(String),
    Inline(InlineCase),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub case: CaseSpec,
    /// Replace the forcing by zero (the exact solution is then unknown).
    pub drop_forcing: bool,
    pub degree: usize,
    /// Element count; the coarsest level for `converge`.
    pub m: usize,
    pub mesh_jitter: f64,
    pub time_steps: usize,
    pub time_jitter: f64,
    pub seed: u64,
    /// Record measured wall time per step; otherwise the column is zero so
    /// that output is reproducible byte for byte.
    pub timing: bool,
    /// `.csv` and `.json` destinations.
    pub outputs: Vec<PathBuf>,

    /// Degrees for `converge`; defaults to `[degree]`.
    pub degrees: Option<Vec<usize>>,
    pub levels: usize,
    pub coupling: Coupling,
    pub steps_factor: f64,
    pub max_over_steps: bool,
    pub min_rate_l2: Option<f64>,
    pub min_rate_h1: Option<f64>,

    /// Step sizes for `consistency`.
    pub ks: Vec<f64>,
    pub t_base: f64,
    pub half_order: [f64; 2],
    pub full_order: [f64; 2],
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            case: CaseSpec::Named("ms1".into()),
            drop_forcing: false,
            degree: 1,
            m: 16,
            mesh_jitter: 0.0,
            time_steps: 16,
            time_jitter: 0.0,
            seed: 0,
            timing: false,
            outputs: Vec::new(),
            degrees: None,
            levels: 4,
            coupling: Coupling::KPropH,
            steps_factor: 1.0,
            max_over_steps: false,
            min_rate_l2: None,
            min_rate_h1: None,
            ks: (3..=9).map(|j| 2f64.powi(-j)).collect(),
            t_base: 0.3,
            half_order: [0.9, 1.1],
            full_order: [1.9, 2.1],
        }
    }
}

/// Command-line flags that override the config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub case: Option<String>,
    pub degree: Option<usize>,
    pub m: Option<usize>,
    pub steps: Option<usize>,
    pub levels: Option<usize>,
    pub coupling: Option<Coupling>,
    pub jitter: Option<f64>,
    pub seed: Option<u64>,
    pub out: Vec<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(c) = &o.case {
            self.case = CaseSpec::Named(c.clone());
        }
        if let Some(p) = o.degree {
            self.degree = p;
            self.degrees = None;
        }
        if let Some(m) = o.m {
            self.m = m;
        }
        if let Some(n) = o.steps {
            self.time_steps = n;
        }
        if let Some(l) = o.levels {
            self.levels = l;
        }
        if let Some(c) = o.coupling {
            self.coupling = c;
        }
        if let Some(j) = o.jitter {
            self.time_jitter = j;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if !o.out.is_empty() {
            self.outputs = o.out.clone();
        }
    }

    pub fn degree_list(&self) -> Vec<usize> {
        self.degrees.clone().unwrap_or_else(|| vec![self.degree])
    }

    pub fn validate(&self) -> Result<()> {
        if let CaseSpec::Named(name) = &self.case {
            if !BUILTIN_CASES.contains(&name.as_str()) {
                return Err(Error::UnknownCase(name.clone()));
            }
        }
        for p in self.degree_list().into_iter().chain([self.degree]) {
            if !(1..=3).contains(&p) {
                return Err(Error::UnsupportedDegree(p));
            }
        }
        if self.m < 2 {
            return Err(Error::InvalidArgument(format!("m must be >= 2, got {}", self.m)));
        }
        if self.time_steps == 0 {
            return Err(Error::InvalidArgument("time_steps must be >= 1".into()));
        }
        for (name, j) in [("time_jitter", self.time_jitter), ("mesh_jitter", self.mesh_jitter)] {
            if !(0.0..0.5).contains(&j) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 0.5), got {j}")));
            }
        }
        for path in &self.outputs {
            match path.extension().and_then(|e| e.to_str()) {
                Some("csv") | Some("json") => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "output {} must end in .csv or .json",
                        path.display()
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn build_case(&self) -> Result<ManufacturedCase> {
        match &self.case {
            CaseSpec::Named(name) => builtin_case(name),
            CaseSpec::Inline(c) => {
                if !(c.domain[0] < c.domain[1]) || !(c.final_time > 0.0) {
                    return Err(Error::InvalidArgument(format!("inline case: bad domain or final time {c:?}")));
                }
                Ok(standing_wave_case(
                    "inline",
                    c.domain[0],
                    c.domain[1],
                    c.lambda,
                    c.omega,
                    c.final_time,
                ))
            }
        }
    }

    pub fn csv_output(&self) -> Option<&Path> {
        self.outputs
            .iter()
            .find(|p| p.extension().is_some_and(|e| e == "csv"))
            .map(PathBuf::as_path)
    }

    pub fn json_output(&self) -> Option<&Path> {
        self.outputs
            .iter()
            .find(|p| p.extension().is_some_and(|e| e == "json"))
            .map(PathBuf::as_path)
    }
}
