use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use super::basis::{eval_basis, reference_nodes, MAX_DEGREE};
use super::mesh::Mesh1D;
use super::quadrature::{gauss_rule, QuadRule, MAX_QUADRATURE_POINTS};
use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Global degree of freedom attached to a local shape function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dof {
    Free(usize),
    /// Node on x = a or x = b, eliminated by the homogeneous Dirichlet condition.
    Boundary,
}

impl Dof {
    pub fn index(self) -> Option<usize> {
        match self {
            Dof::Free(i) => Some(i),
            Dof::Boundary => None,
        }
    }
}

/// Continuous piecewise polynomials of degree `p` vanishing at both ends.
#[derive(Clone, Debug)]
pub struct FeSpace {
    mesh: Mesh1D,
    degree: usize,
    n_dof: usize,
    dof_map: Vec<Vec<Dof>>,
}

/// Basis values (and d/dξ) tabulated at the points of a quadrature rule.
#[derive(Clone, Debug)]
pub struct Tabulation {
    pub rule: QuadRule,
    /// `values[q][i]`: shape `i` at point `q`.
    pub values: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
}

impl FeSpace {
    pub fn new(mesh: Mesh1D, degree: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        let m = mesh.m();
        let last = m * degree;
        let dof_map = (0..m)
            .map(|e| {
                (0..=degree)
                    .map(|i| match e * degree + i {
                        0 => Dof::Boundary,
                        g if g == last => Dof::Boundary,
                        g => Dof::Free(g - 1),
                    })
                    .collect()
            })
            .collect();
        Ok(FeSpace {
            mesh,
            degree,
            n_dof: last - 1,
            dof_map,
        })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    /// Half bandwidth of the assembled matrices.
    pub fn bandwidth(&self) -> usize {
        self.degree
    }

    pub fn element_dofs(&self, e: usize) -> &[Dof] {
        &self.dof_map[e]
    }

    pub fn dof_map(&self) -> &[Vec<Dof>] {
        &self.dof_map
    }

    /// Default quadrature size for assembly, `p + 2` points.
    pub fn assembly_points(&self) -> usize {
        self.degree + 2
    }

    /// Quadrature size used for error norms, two above assembly.
    pub fn error_points(&self) -> usize {
        (self.degree + 4).min(MAX_QUADRATURE_POINTS)
    }

    pub fn tabulate(&self, q: usize) -> Result<Tabulation> {
        let rule = gauss_rule(q)?;
        let mut values = Vec::with_capacity(q);
        let mut derivatives = Vec::with_capacity(q);
        for &xi in &rule.points {
            let b = eval_basis(self.degree, xi)?;
            values.push(b.values);
            derivatives.push(b.derivatives);
        }
        Ok(Tabulation {
            rule,
            values,
            derivatives,
        })
    }

    /// Physical coordinates of the free DOFs, in DOF order.
    pub fn dof_coordinates(&self) -> Vec<f64> {
        let refs = reference_nodes(self.degree).expect("degree validated");
        let mut xs = vec![0.0; self.n_dof];
        for e in 0..self.mesh.m() {
            let (lo, hi) = self.mesh.element(e);
            for (i, dof) in self.dof_map[e].iter().enumerate() {
                if let Dof::Free(g) = dof {
                    xs[*g] = map_to_physical(lo, hi, refs[i]);
                }
            }
        }
        xs
    }

    pub fn zeros(&self) -> FieldVector {
        FieldVector(vec![Complex64::new(0.0, 0.0); self.n_dof])
    }

    pub fn check(&self, v: &FieldVector) -> Result<()> {
        if v.len() != self.n_dof {
            return Err(Error::DimensionMismatch {
                expected: self.n_dof,
                actual: v.len(),
            });
        }
        Ok(())
    }

    /// Nodal interpolant of `field(t, ·)`; boundary values are dropped.
    pub fn interpolate(&self, field: &dyn ScalarField, t: f64) -> FieldVector {
        FieldVector(
            self.dof_coordinates()
                .into_iter()
                .map(|x| field.value(t, x))
                .collect(),
        )
    }

    /// Value and x-derivative of the FE function on element `e` at reference point `xi`.
    pub fn eval_on_element(&self, coeffs: &[Complex64], e: usize, xi: f64) -> (Complex64, Complex64) {
        let b = eval_basis(self.degree, xi).expect("degree validated");
        let (lo, hi) = self.mesh.element(e);
        let inv_jac = 2.0 / (hi - lo);
        self.combine(coeffs, e, &b.values, &b.derivatives, inv_jac)
    }

    pub(crate) fn combine(
        &self,
        coeffs: &[Complex64],
        e: usize,
        values: &[f64],
        derivatives: &[f64],
        inv_jac: f64,
    ) -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for (i, dof) in self.dof_map[e].iter().enumerate() {
            if let Dof::Free(g) = dof {
                v += coeffs[*g] * values[i];
                d += coeffs[*g] * (derivatives[i] * inv_jac);
            }
        }
        (v, d)
    }

    /// Value of the FE function at a physical point.
    pub fn evaluate(&self, coeffs: &[Complex64], x: f64) -> Option<Complex64> {
        let e = self.mesh.locate(x)?;
        let (lo, hi) = self.mesh.element(e);
        let xi = ((2.0 * x - lo - hi) / (hi - lo)).clamp(-1.0, 1.0);
        Some(self.eval_on_element(coeffs, e, xi).0)
    }
}

pub(crate) fn map_to_physical(lo: f64, hi: f64, xi: f64) -> f64 {
    0.5 * (lo + hi) + 0.5 * (hi - lo) * xi
}

/// Complex coefficient vector of an FE function.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FieldVector(pub Vec<Complex64>);

impl FieldVector {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        FieldVector(coeffs)
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// Euclidean norm of the coefficients (not the L2 norm of the function).
    pub fn coeff_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Deref for FieldVector {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl DerefMut for FieldVector {
    fn deref_mut(&mut self) -> &mut [Complex64] {
        &mut self.0
    }
}

impl From<Vec<Complex64>> for FieldVector {
    fn from(v: Vec<Complex64>) -> Self {
        FieldVector(v)
    }
}
