use std::fmt;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real nonlinearity `f: [0, ∞) → ℝ` entering the equation as `f(|u|²) u`.
#[derive(Clone)]
pub enum Nonlinearity {
    /// `f(s) = λ s`, the cubic equation.
    Cubic { lambda: f64 },
    /// `f(s) = λ s^σ`.
    Power { lambda: f64, sigma: f64 },
    /// Arbitrary `f` together with its derivative.
    Custom { f: RealFn, df: RealFn },
}

impl Nonlinearity {
    pub fn cubic(lambda: f64) -> Self {
        Nonlinearity::Cubic { lambda }
    }

    pub fn zero() -> Self {
        Nonlinearity::Cubic { lambda: 0.0 }
    }

    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Nonlinearity::Custom {
            f: Arc::new(f),
            df: Arc::new(df),
        }
    }

    /// Constant `f ≡ c`.
    pub fn constant(c: f64) -> Self {
        Self::custom(move |_| c, |_| 0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Nonlinearity::Cubic { lambda } => lambda * s,
            Nonlinearity::Power { lambda, sigma } => lambda * s.powf(*sigma),
            Nonlinearity::Custom { f, .. } => f(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Nonlinearity::Cubic { lambda } => *lambda,
            Nonlinearity::Power { lambda, sigma } => {
                if *sigma == 1.0 {
                    *lambda
                } else {
                    lambda * sigma * s.powf(sigma - 1.0)
                }
            }
            Nonlinearity::Custom { df, .. } => df(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Nonlinearity::Cubic { lambda } | Nonlinearity::Power { lambda, .. } => *lambda == 0.0,
            Nonlinearity::Custom { .. } => false,
        }
    }

    /// `sup |f'|` over `[0, upper]`. Exact for the closed-form kinds; the
    /// custom kind is sampled at 257 equispaced points.
    pub fn derivative_sup(&self, upper: f64) -> f64 {
        match self {
            Nonlinearity::Cubic { lambda } => lambda.abs(),
            Nonlinearity::Power { .. } => {
                // |λσ s^(σ-1)| is monotone in s
                self.derivative(0.0).abs().max(self.derivative(upper).abs())
            }
            Nonlinearity::Custom { df, .. } => (0..=256)
                .map(|i| df(upper * i as f64 / 256.0).abs())
                .fold(0.0, f64::max),
        }
    }
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nonlinearity::Cubic { lambda } => write!(f, "Cubic {{ lambda: {lambda} }}"),
            Nonlinearity::Power { lambda, sigma } => {
                write!(f, "Power {{ lambda: {lambda}, sigma: {sigma} }}")
            }
            Nonlinearity::Custom { .. } => write!(f, "Custom"),
        }
    }
}
