use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Partial, ScalarField, ZeroField};
use crate::nonlinearity::Nonlinearity;
use crate::timestep::NlsProblem;

pub const BUILTIN_CASES: [&str; 3] = ["ms1", "free1", "zero"];

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `u(t, x) = e^{iωt} sin(κ(x − a))` with `κ = π / (b − a)`, the first
/// Dirichlet mode on `(a, b)` rotating with frequency `ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandingWave {
    pub a: f64,
    pub b: f64,
    pub omega: f64,
}

impl StandingWave {
    pub fn kappa(&self) -> f64 {
        PI / (self.b - self.a)
    }

    fn phase(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.omega * t)
    }

    fn profile(&self, x: f64) -> f64 {
        (self.kappa() * (x - self.a)).sin()
    }
}

impl ScalarField for StandingWave {
    fn value(&self, t: f64, x: f64) -> Complex64 {
        self.phase(t) * self.profile(x)
    }

    fn partial(&self, which: Partial, t: f64, x: f64) -> Option<Complex64> {
        let k2 = self.kappa() * self.kappa();
        let w = Complex64::new(0.0, self.omega);
        let u = self.value(t, x);
        Some(match which {
            Partial::X => self.phase(t) * (self.kappa() * (self.kappa() * (x - self.a)).cos()),
            Partial::Laplacian => -k2 * u,
            Partial::T => w * u,
            Partial::TT => w * w * u,
            Partial::TTT => w * w * w * u,
            Partial::LaplacianT => -k2 * w * u,
            Partial::LaplacianTT => -k2 * w * w * u,
        })
    }
}

/// `g = u_t − i u_xx − i f(|u|²) u` for a [`StandingWave`] `u`.
#[derive(Clone, Debug)]
pub struct StandingWaveForcing {
    pub wave: StandingWave,
    pub nonlinearity: Nonlinearity,
}

impl ScalarField for StandingWaveForcing {
    fn value(&self, t: f64, x: f64) -> Complex64 {
        let u = self.wave.value(t, x);
        let k2 = self.wave.kappa().powi(2);
        I * u * (self.wave.omega + k2 - self.nonlinearity.eval(u.norm_sqr()))
    }
}

/// Problem with known exact solution.
#[derive(Clone, Debug)]
pub struct ManufacturedCase {
    pub name: String,
    pub description: String,
    pub problem: NlsProblem,
}

impl ManufacturedCase {
    pub fn exact(&self) -> &Arc<dyn ScalarField> {
        self.problem
            .exact
            .as_ref()
            .expect("manufactured cases carry their exact solution")
    }

    /// `max |u_t − i u_xx − i f(|u|²) u − g|` over an `nt × nx` grid of
    /// `[0, T] × [a, b]`.
    pub fn pde_residual_max(&self, nt: usize, nx: usize) -> Result<f64> {
        let p = &self.problem;
        let u = self.exact();
        let (a, b) = p.domain;
        let mut worst = 0.0f64;
        for it in 0..nt {
            let t = p.final_time * it as f64 / (nt - 1).max(1) as f64;
            for ix in 0..nx {
                let x = a + (b - a) * ix as f64 / (nx - 1).max(1) as f64;
                let v = u.value(t, x);
                let r = u.require(Partial::T, t, x)?
                    - I * u.require(Partial::Laplacian, t, x)?
                    - I * p.nonlinearity.eval(v.norm_sqr()) * v
                    - p.forcing.value(t, x);
                worst = worst.max(r.norm());
            }
        }
        Ok(worst)
    }
}

/// Standing wave on `(a, b)` with cubic nonlinearity `λ s` and the forcing
/// that makes it exact.
pub fn standing_wave_case(name: &str, a: f64, b: f64, lambda: f64, omega: f64, final_time: f64) -> ManufacturedCase {
    let wave = StandingWave { a, b, omega };
    let nonlinearity = Nonlinearity::cubic(lambda);
    let wave_field: Arc<dyn ScalarField> = Arc::new(wave);
    ManufacturedCase {
        name: name.to_string(),
        description: format!(
            "u = exp(i*{omega}*t) sin(pi (x - {a}) / {}), f(s) = {lambda} s, T = {final_time}",
            b - a
        ),
        problem: NlsProblem {
            domain: (a, b),
            final_time,
            forcing: Arc::new(StandingWaveForcing {
                wave,
                nonlinearity: nonlinearity.clone(),
            }),
            nonlinearity,
            initial: wave_field.clone(),
            exact: Some(wave_field),
        },
    }
}

pub fn builtin_case(name: &str) -> Result<ManufacturedCase> {
    match name {
        "ms1" => {
            let mut case = standing_wave_case("ms1", 0.0, 1.0, 1.0, 1.0, 1.0);
            case.description = "u = exp(it) sin(pi x), f(s) = s, g = i u (1 + pi^2 - sin^2(pi x))".into();
            Ok(case)
        }
        "free1" => {
            let wave: Arc<dyn ScalarField> = Arc::new(StandingWave {
                a: 0.0,
                b: 1.0,
                omega: -PI * PI,
            });
            Ok(ManufacturedCase {
                name: "free1".into(),
                description: "u = exp(-i pi^2 t) sin(pi x), f = 0, g = 0".into(),
                problem: NlsProblem {
                    domain: (0.0, 1.0),
                    final_time: 1.0,
                    nonlinearity: Nonlinearity::zero(),
                    forcing: Arc::new(ZeroField),
                    initial: wave.clone(),
                    exact: Some(wave),
                },
            })
        }
        "zero" => Ok(ManufacturedCase {
            name: "zero".into(),
            description: "u = 0, f(s) = s, g = 0".into(),
            problem: NlsProblem {
                domain: (0.0, 1.0),
                final_time: 1.0,
                nonlinearity: Nonlinearity::cubic(1.0),
                forcing: Arc::new(ZeroField),
                initial: Arc::new(ZeroField),
                exact: Some(Arc::new(ZeroField)),
            },
        }),
        other => Err(Error::UnknownCase(other.to_string())),
    }
}
