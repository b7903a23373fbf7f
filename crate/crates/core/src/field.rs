//! Space-time scalar fields: forcing terms, initial data and exact solutions.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Partial derivatives a field may expose. `Laplacian` is `∂²/∂x²` in one dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Partial {
    X,
    Laplacian,
    T,
    TT,
    TTT,
    LaplacianT,
    LaplacianTT,
}

pub trait ScalarField: Send + Sync {
    fn value(&self, t: f64, x: f64) -> Complex64;

    /// Analytic partial derivative, if the field provides it.
    fn partial(&self, _which: Partial, _t: f64, _x: f64) -> Option<Complex64> {
        None
    }

    fn has_partial(&self, which: Partial) -> bool {
        self.partial(which, 0.0, 0.0).is_some()
    }

    fn require(&self, which: Partial, t: f64, x: f64) -> Result<Complex64> {
        self.partial(which, t, x).ok_or(Error::MissingDerivative(which))
    }
}

/// The field that is identically zero, with all derivatives.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroField;

impl ScalarField for ZeroField {
    fn value(&self, _t: f64, _x: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn partial(&self, _which: Partial, _t: f64, _x: f64) -> Option<Complex64> {
        Some(Complex64::new(0.0, 0.0))
    }
}

type FieldFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Field built from closures.
#[derive(Clone)]
pub struct FnField {
    value: FieldFn,
    partials: Vec<(Partial, FieldFn)>,
}

impl FnField {
    pub fn new(value: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        FnField {
            value: Arc::new(value),
            partials: Vec::new(),
        }
    }

    pub fn with_partial(
        mut self,
        which: Partial,
        f: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        self.partials.retain(|(p, _)| *p != which);
        self.partials.push((which, Arc::new(f)));
        self
    }
}

impl std::fmt::Debug for FnField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let partials: Vec<_> = self.partials.iter().map(|(p, _)| *p).collect();
        f.debug_struct("FnField").field("partials", &partials).finish()
    }
}

impl ScalarField for FnField {
    fn value(&self, t: f64, x: f64) -> Complex64 {
        (self.value)(t, x)
    }

    fn partial(&self, which: Partial, t: f64, x: f64) -> Option<Complex64> {
        self.partials
            .iter()
            .find(|(p, _)| *p == which)
            .map(|(_, f)| f(t, x))
    }
}

impl<T: ScalarField + ?Sized> ScalarField for Arc<T> {
    fn value(&self, t: f64, x: f64) -> Complex64 {
        (**self).value(t, x)
    }

    fn partial(&self, which: Partial, t: f64, x: f64) -> Option<Complex64> {
        (**self).partial(which, t, x)
    }
}

/// Freezes a field at `t0`, ignoring the time argument.
#[derive(Clone)]
pub struct Frozen<F> {
    pub field: F,
    pub t0: f64,
}

impl<F: ScalarField> ScalarField for Frozen<F> {
    fn value(&self, _t: f64, x: f64) -> Complex64 {
        self.field.value(self.t0, x)
    }

    fn partial(&self, which: Partial, _t: f64, x: f64) -> Option<Complex64> {
        match which {
            Partial::X | Partial::Laplacian => self.field.partial(which, self.t0, x),
            _ => Some(Complex64::new(0.0, 0.0)),
        }
    }
}
