//! Galerkin matrices and load vectors over the Dirichlet-constrained space.
//!
//! All integrals use the `p + 2` point Gauss rule per element. Matrix entry
//! `(j, k)` is the sesquilinear form evaluated at `(φ_k, φ_j)`; the basis is
//! real, so every matrix here is real symmetric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fe::{Dof, FeSpace, FieldVector, Tabulation};
use crate::field::ScalarField;
use crate::linalg::BandedMatrix;
use crate::nonlinearity::Nonlinearity;

fn new_matrix(space: &FeSpace) -> BandedMatrix {
    let p = space.bandwidth();
    BandedMatrix::zeros(space.n_dof(), p, p)
}

/// Adds `weight_q * local(q, i, j)` for every pair of free DOFs of every element.
fn assemble_bilinear<W, L>(space: &FeSpace, tab: &Tabulation, mut weight: W, local: L) -> Result<BandedMatrix>
where
    W: FnMut(usize, usize, f64) -> Result<f64>,
    L: Fn(&Tabulation, usize, usize, usize, f64) -> f64,
{
    let mut mat = new_matrix(space);
    let mesh = space.mesh();
    for e in 0..mesh.m() {
        let (lo, hi) = mesh.element(e);
        let jac = 0.5 * (hi - lo);
        let dofs = space.element_dofs(e);
        for (q, (xi, w)) in tab.rule.iter().enumerate() {
            let x = 0.5 * (lo + hi) + jac * xi;
            let c = weight(e, q, x)? * w * jac;
            if c == 0.0 {
                continue;
            }
            for (i, di) in dofs.iter().enumerate() {
                let Dof::Free(gi) = *di else { continue };
                for (j, dj) in dofs.iter().enumerate() {
                    let Dof::Free(gj) = *dj else { continue };
                    mat.add(gi, gj, Complex64::new(c * local(tab, q, i, j, jac), 0.0));
                }
            }
        }
    }
    Ok(mat)
}

fn mass_local(tab: &Tabulation, q: usize, i: usize, j: usize, _jac: f64) -> f64 {
    tab.values[q][i] * tab.values[q][j]
}

pub fn assemble_mass(space: &FeSpace) -> Result<BandedMatrix> {
    let tab = space.tabulate(space.assembly_points())?;
    assemble_bilinear(space, &tab, |_, _, _| Ok(1.0), mass_local)
}

pub fn assemble_stiffness(space: &FeSpace) -> Result<BandedMatrix> {
    let tab = space.tabulate(space.assembly_points())?;
    assemble_bilinear(space, &tab, |_, _, _| Ok(1.0), |tab, q, i, j, jac| {
        tab.derivatives[q][i] * tab.derivatives[q][j] / (jac * jac)
    })
}

/// `N_jk = ∫ f(|W|²) φ_k φ_j`, with `|W|²` taken pointwise from the FE expansion of `w`.
pub fn assemble_weighted_mass(space: &FeSpace, w: &FieldVector, f: &Nonlinearity) -> Result<BandedMatrix> {
    space.check(w)?;
    let tab = space.tabulate(space.assembly_points())?;
    if f.is_zero() {
        return Ok(new_matrix(space));
    }
    let mesh = space.mesh();
    assemble_bilinear(
        space,
        &tab,
        |e, q, x| {
            let (lo, hi) = mesh.element(e);
            let (val, _) = space.combine(w, e, &tab.values[q], &tab.derivatives[q], 2.0 / (hi - lo));
            let weight = f.eval(val.norm_sqr());
            if weight.is_finite() {
                Ok(weight)
            } else {
                Err(Error::NonFiniteWeight { x, value: weight })
            }
        },
        mass_local,
    )
}

/// `b_j = (g(t, ·), φ_j)` by quadrature of `g` itself.
pub fn assemble_load(space: &FeSpace, g: &dyn ScalarField, t: f64) -> Result<FieldVector> {
    let tab = space.tabulate(space.assembly_points())?;
    let mut b = space.zeros();
    let mesh = space.mesh();
    for e in 0..mesh.m() {
        let (lo, hi) = mesh.element(e);
        let jac = 0.5 * (hi - lo);
        for (q, (xi, w)) in tab.rule.iter().enumerate() {
            let x = 0.5 * (lo + hi) + jac * xi;
            let gv = g.value(t, x);
            if !(gv.re.is_finite() && gv.im.is_finite()) {
                return Err(Error::NonFiniteWeight {
                    x,
                    value: if gv.re.is_finite() { gv.im } else { gv.re },
                });
            }
            for (i, d) in space.element_dofs(e).iter().enumerate() {
                if let Dof::Free(gi) = *d {
                    b[gi] += gv * (w * jac * tab.values[q][i]);
                }
            }
        }
    }
    Ok(b)
}

/// Both sides of the Lipschitz-type bound
/// `‖f(|u₁|²) − f(|u₂|²)‖ ≤ sup_{[0, s]} |f'| · (‖u₁‖∞ + ‖u₂‖∞) · ‖u₁ − u₂‖`,
/// with `s = max(‖u₁‖∞², ‖u₂‖∞²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl LipschitzCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Evaluates [`LipschitzCheck`] for two FE functions. L2 norms use the
/// error quadrature; sup norms take the maximum over all element nodes,
/// quadrature points and `samples_per_element` equispaced points.
pub fn nonlinearity_lipschitz_check(
    space: &FeSpace,
    u1: &FieldVector,
    u2: &FieldVector,
    f: &Nonlinearity,
    samples_per_element: usize,
) -> Result<LipschitzCheck> {
    space.check(u1)?;
    space.check(u2)?;
    let tab = space.tabulate(space.error_points())?;
    let mesh = space.mesh();
    let mut lhs_sq = 0.0;
    let mut diff_sq = 0.0;
    let (mut sup1, mut sup2) = (0.0f64, 0.0f64);
    let s = samples_per_element.max(2);
    for e in 0..mesh.m() {
        let (lo, hi) = mesh.element(e);
        let jac = 0.5 * (hi - lo);
        for (q, (_, w)) in tab.rule.iter().enumerate() {
            let (a, _) = space.combine(u1, e, &tab.values[q], &tab.derivatives[q], 1.0 / jac);
            let (b, _) = space.combine(u2, e, &tab.values[q], &tab.derivatives[q], 1.0 / jac);
            let d = f.eval(a.norm_sqr()) - f.eval(b.norm_sqr());
            lhs_sq += w * jac * d * d;
            diff_sq += w * jac * (a - b).norm_sqr();
            sup1 = sup1.max(a.norm());
            sup2 = sup2.max(b.norm());
        }
        for k in 0..s {
            let xi = -1.0 + 2.0 * k as f64 / (s - 1) as f64;
            sup1 = sup1.max(space.eval_on_element(u1, e, xi).0.norm());
            sup2 = sup2.max(space.eval_on_element(u2, e, xi).0.norm());
        }
    }
    let upper = sup1.max(sup2).powi(2);
    Ok(LipschitzCheck {
        lhs: lhs_sq.sqrt(),
        rhs: f.derivative_sup(upper) * (sup1 + sup2) * diff_sq.sqrt(),
    })
}
