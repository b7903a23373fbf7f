use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cases::ManufacturedCase;
use crate::error::{Error, Result};
use crate::fe::gauss_rule;
use crate::field::Partial;

const I: Complex64 = Complex64::new(0.0, 1.0);
const SUBINTERVALS: usize = 64;

/// Norms of the defects left when the exact solution is inserted into the
/// half-step and full-step relations, for a sweep of step sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub t_base: f64,
    pub ks: Vec<f64>,
    pub r_half_norms: Vec<f64>,
    pub r_full_norms: Vec<f64>,
    /// Least-squares slope of `log ‖r^{n−1/2}‖` against `log k`; `None` when
    /// a residual vanishes.
    pub fitted_order_half: Option<f64>,
    pub fitted_order_full: Option<f64>,
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() || ys.iter().chain(xs).any(|v| !(*v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Evaluates `r^{n−1/2}` and `r^n` pointwise with `t_{n−1} = t_base` and
/// `k_n = k` for each `k`, and returns their L2 norms over the domain.
pub fn consistency_residuals(case: &ManufacturedCase, ks: &[f64], t_base: f64) -> Result<ConsistencyReport> {
    if let Some(k) = ks.iter().find(|k| !(**k > 0.0)) {
        return Err(Error::InvalidArgument(format!("step {k} must be positive")));
    }
    let p = &case.problem;
    let u = case.exact();
    let f = &p.nonlinearity;
    let g = &p.forcing;
    let (a, b) = p.domain;
    let rule = gauss_rule(8)?;
    let width = (b - a) / SUBINTERVALS as f64;

    let mut r_half_norms = Vec::with_capacity(ks.len());
    let mut r_full_norms = Vec::with_capacity(ks.len());
    for &k in ks {
        let t0 = t_base;
        let th = t_base + 0.5 * k;
        let t1 = t_base + k;
        let residuals = |x: f64| -> Result<(Complex64, Complex64)> {
            let u0 = u.value(t0, x);
            let uh = u.value(th, x);
            let u1 = u.value(t1, x);
            let lap0 = u.require(Partial::Laplacian, t0, x)?;
            let laph = u.require(Partial::Laplacian, th, x)?;
            let lap1 = u.require(Partial::Laplacian, t1, x)?;
            let r_half = (uh - u0) / (0.5 * k)
                - I * 0.5 * (laph + lap0)
                - I * f.eval(u0.norm_sqr()) * 0.5 * (uh + u0)
                - g.value(t0, x);
            let r_full = (u1 - u0) / k
                - I * 0.5 * (lap1 + lap0)
                - I * f.eval(uh.norm_sqr()) * 0.5 * (u1 + u0)
                - g.value(th, x);
            Ok((r_half, r_full))
        };
        let (mut sh, mut sf) = (0.0, 0.0);
        for s in 0..SUBINTERVALS {
            let lo = a + s as f64 * width;
            let mid = lo + 0.5 * width;
            for (xi, w) in rule.iter() {
                let (rh, rf) = residuals(mid + 0.5 * width * xi)?;
                sh += w * 0.5 * width * rh.norm_sqr();
                sf += w * 0.5 * width * rf.norm_sqr();
            }
        }
        r_half_norms.push(sh.sqrt());
        r_full_norms.push(sf.sqrt());
    }
    Ok(ConsistencyReport {
        t_base,
        ks: ks.to_vec(),
        fitted_order_half: loglog_slope(ks, &r_half_norms),
        fitted_order_full: loglog_slope(ks, &r_full_norms),
        r_half_norms,
        r_full_norms,
    })
}
