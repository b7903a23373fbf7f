use num_complex::Complex64;

use crate::error::Result;
use crate::fe::{FeSpace, FieldVector};
use crate::field::{Partial, ScalarField};

/// Sums `w · |integrand|²` over all elements with a `points`-point Gauss rule
/// and returns the square root. The integrand receives `(e, q, x, U_h(x), U_h'(x))`.
fn quad_norm<F>(space: &FeSpace, coeffs: Option<&FieldVector>, points: usize, mut integrand: F) -> Result<f64>
where
    F: FnMut(f64, Complex64, Complex64) -> Result<Complex64>,
{
    let tab = space.tabulate(points)?;
    let mesh = space.mesh();
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = 0.0;
    for e in 0..mesh.m() {
        let (lo, hi) = mesh.element(e);
        let jac = 0.5 * (hi - lo);
        for (q, (xi, w)) in tab.rule.iter().enumerate() {
            let x = 0.5 * (lo + hi) + jac * xi;
            let (v, d) = match coeffs {
                Some(c) => space.combine(c, e, &tab.values[q], &tab.derivatives[q], 1.0 / jac),
                None => (zero, zero),
            };
            acc += w * jac * integrand(x, v, d)?.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// `‖g(t, ·)‖_{L2}` over the mesh of `space`.
pub fn field_l2_norm(space: &FeSpace, g: &dyn ScalarField, t: f64) -> Result<f64> {
    quad_norm(space, None, space.error_points(), |x, _, _| Ok(g.value(t, x)))
}

/// L2 norm of an FE function.
pub fn fe_l2_norm(space: &FeSpace, u: &FieldVector) -> Result<f64> {
    space.check(u)?;
    quad_norm(space, Some(u), space.error_points(), |_, v, _| Ok(v))
}

/// `‖U_h − u(t, ·)‖_{L2}` with the default error quadrature (`p + 4` points, at most 8).
pub fn error_l2(space: &FeSpace, u: &FieldVector, exact: &dyn ScalarField, t: f64) -> Result<f64> {
    error_l2_with_points(space, u, exact, t, space.error_points())
}

pub fn error_l2_with_points(
    space: &FeSpace,
    u: &FieldVector,
    exact: &dyn ScalarField,
    t: f64,
    points: usize,
) -> Result<f64> {
    space.check(u)?;
    quad_norm(space, Some(u), points, |x, v, _| Ok(v - exact.value(t, x)))
}

/// `‖∂ₓU_h − ∂ₓu(t, ·)‖_{L2}`.
pub fn error_h1(space: &FeSpace, u: &FieldVector, exact: &dyn ScalarField, t: f64) -> Result<f64> {
    space.check(u)?;
    quad_norm(space, Some(u), space.error_points(), |x, _, d| {
        Ok(d - exact.require(Partial::X, t, x)?)
    })
}
