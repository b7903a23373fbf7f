use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 3;

/// Shape function values and reference-coordinate derivatives at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisEval {
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
}

/// Equispaced Lagrange nodes on [-1, 1], left endpoint first.
pub fn reference_nodes(degree: usize) -> Result<Vec<f64>> {
    if !(1..=MAX_DEGREE).contains(&degree) {
        return Err(Error::UnsupportedDegree(degree));
    }
    Ok((0..=degree)
        .map(|i| -1.0 + 2.0 * i as f64 / degree as f64)
        .collect())
}

/// Lagrange shape functions of `degree` and their derivatives d/dξ at `xi`.
pub fn eval_basis(degree: usize, xi: f64) -> Result<BasisEval> {
    let nodes = reference_nodes(degree)?;
    if !(-1.0..=1.0).contains(&xi) {
        return Err(Error::InvalidArgument(format!(
            "reference point {xi} outside [-1, 1]"
        )));
    }
    let n = nodes.len();
    let mut values = vec![0.0; n];
    let mut derivatives = vec![0.0; n];
    for i in 0..n {
        let denom: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| nodes[i] - nodes[j])
            .product();
        let mut v = 1.0;
        let mut d = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            // product rule, accumulated alongside the value
            d = d * (xi - nodes[j]) + v;
            v *= xi - nodes[j];
        }
        values[i] = v / denom;
        derivatives[i] = d / denom;
    }
    Ok(BasisEval {
        values,
        derivatives,
    })
}
