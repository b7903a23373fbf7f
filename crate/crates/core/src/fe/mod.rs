//! One-dimensional meshes, Lagrange elements and Gauss quadrature.

mod basis;
mod mesh;
mod quadrature;
mod space;

pub use basis::{eval_basis, reference_nodes, BasisEval, MAX_DEGREE};
pub use mesh::{build_perturbed_mesh, build_uniform_mesh, Mesh1D, DEFAULT_QUASI_UNIFORMITY};
pub use quadrature::{gauss_rule, QuadRule, MAX_QUADRATURE_POINTS};
pub use space::{Dof, FeSpace, FieldVector, Tabulation};
