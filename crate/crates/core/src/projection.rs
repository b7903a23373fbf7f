//! Ritz and L2 projections onto the FE space, and the discrete Laplacian.

use num_complex::Complex64;

use crate::assembly::{assemble_load, assemble_mass, assemble_stiffness};
use crate::error::Result;
use crate::fe::{Dof, FeSpace, FieldVector};
use crate::field::{Partial, ScalarField};

/// `b_j = (∂ₓv(t, ·), φ_j')` using the analytic derivative of `v`.
pub fn ritz_load(space: &FeSpace, v: &dyn ScalarField, t: f64, points: usize) -> Result<FieldVector> {
    let tab = space.tabulate(points)?;
    let mut b = space.zeros();
    let mesh = space.mesh();
    for e in 0..mesh.m() {
        let (lo, hi) = mesh.element(e);
        let jac = 0.5 * (hi - lo);
        for (q, (xi, w)) in tab.rule.iter().enumerate() {
            let x = 0.5 * (lo + hi) + jac * xi;
            let dv = v.require(Partial::X, t, x)?;
            for (i, d) in space.element_dofs(e).iter().enumerate() {
                if let Dof::Free(g) = *d {
                    // w · jac · φ'(x), with φ'(x) = dφ/dξ / jac
                    b[g] += dv * (w * tab.derivatives[q][i]);
                }
            }
        }
    }
    Ok(b)
}

/// Elliptic projection: `(∇R_h v, ∇χ) = (∇v, ∇χ)` for all `χ` in the space.
pub fn ritz_project(space: &FeSpace, v: &dyn ScalarField, t: f64) -> Result<FieldVector> {
    let b = ritz_load(space, v, t, space.assembly_points())?;
    assemble_stiffness(space)?.lu()?.solve(&b)
}

pub fn l2_project(space: &FeSpace, v: &dyn ScalarField, t: f64) -> Result<FieldVector> {
    let b = assemble_load(space, v, t)?;
    assemble_mass(space)?.lu()?.solve(&b)
}

/// `Δ_h φ` defined by `(Δ_h φ, χ) = −(∇φ, ∇χ)`, i.e. `M y = −A φ`.
pub fn discrete_laplacian(space: &FeSpace, phi: &FieldVector) -> Result<FieldVector> {
    space.check(phi)?;
    let mut rhs = assemble_stiffness(space)?.matvec(phi)?;
    rhs.iter_mut().for_each(|z| *z = -*z);
    assemble_mass(space)?.lu()?.solve(&rhs)
}

/// Discrete inner product `(u, v)_M = v^H M u` of two FE functions.
pub fn mass_inner(space: &FeSpace, u: &FieldVector, v: &FieldVector) -> Result<Complex64> {
    let mu = assemble_mass(space)?.matvec(u)?;
    Ok(v.iter().zip(mu.iter()).map(|(a, b)| a.conj() * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fe::build_uniform_mesh;
    use crate::field::{FnField, ZeroField};
    use std::f64::consts::PI;

    fn sine() -> FnField {
        FnField::new(|_, x| Complex64::new((PI * x).sin(), 0.0))
            .with_partial(Partial::X, |_, x| Complex64::new(PI * (PI * x).cos(), 0.0))
    }

    #[test]
    fn missing_derivative() {
        let s = FeSpace::new(build_uniform_mesh(0.0, 1.0, 4).unwrap(), 1).unwrap();
        let v = FnField::new(|_, x| Complex64::new(x, 0.0));
        assert!(matches!(
            ritz_project(&s, &v, 0.0),
            Err(Error::MissingDerivative(Partial::X))
        ));
    }

    #[test]
    fn zero_projections() {
        let s = FeSpace::new(build_uniform_mesh(0.0, 1.0, 6).unwrap(), 2).unwrap();
        assert!(ritz_project(&s, &ZeroField, 0.0).unwrap().iter().all(|z| z.norm() == 0.0));
        assert!(l2_project(&s, &ZeroField, 0.0).unwrap().iter().all(|z| z.norm() == 0.0));
        let y = discrete_laplacian(&s, &s.zeros()).unwrap();
        assert!(y.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn p1_ritz_is_nodal_in_1d() {
        // In one dimension the P1 Ritz projection interpolates at the vertices.
        let s = FeSpace::new(build_uniform_mesh(0.0, 1.0, 10).unwrap(), 1).unwrap();
        let r = ritz_project(&s, &sine(), 0.0).unwrap();
        let i = s.interpolate(&sine(), 0.0);
        for (a, b) in r.iter().zip(i.iter()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn laplacian_identity() {
        let s = FeSpace::new(build_uniform_mesh(0.0, 1.0, 7).unwrap(), 3).unwrap();
        let phi: FieldVector = (0..s.n_dof())
            .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
            .collect::<Vec<_>>()
            .into();
        let y = discrete_laplacian(&s, &phi).unwrap();
        let lhs = mass_inner(&s, &y, &phi).unwrap();
        let rhs = -assemble_stiffness(&s).unwrap().quadratic_form(&phi).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }
}
