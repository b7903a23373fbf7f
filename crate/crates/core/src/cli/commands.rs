use serde_json::json;
use thiserror::Error;

use super::config::RunConfig;
use super::output::{format_float, write_csv, write_json};
use crate::error::Error;
use crate::fe::{build_perturbed_mesh, FeSpace};
use crate::timestep::{advance_with, TimeGrid};
use crate::verification::{consistency_residuals, convergence_study, error_h1, error_l2, StudyOptions};

/// Residual norms at or below this count as exactly zero in `consistency`.
const ZERO_RESIDUAL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[source] Error),
    #[error("solver error: {0}")]
    Solver(#[source] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 1,
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug)]
pub struct Outcome {
    /// 0, or 3 when a configured rate/order threshold was missed.
    pub exit_code: i32,
    pub summary: serde_json::Value,
}

fn config_err(e: Error) -> CliError {
    CliError::Config(e)
}

fn finish(config: &RunConfig, summary: serde_json::Value, exit_code: i32) -> Result<Outcome, CliError> {
    if let Some(p) = config.json_output() {
        write_json(p, &summary)?;
    }
    Ok(Outcome { exit_code, summary })
}

pub fn cmd_run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate().map_err(config_err)?;
    let case = config.build_case().map_err(config_err)?;
    let problem = if config.drop_forcing {
        case.problem.without_forcing()
    } else {
        case.problem.clone()
    };
    let (a, b) = problem.domain;
    let mesh = build_perturbed_mesh(a, b, config.m, config.mesh_jitter, config.seed.wrapping_add(1))
        .map_err(config_err)?;
    let space = FeSpace::new(mesh, config.degree).map_err(config_err)?;
    let grid = TimeGrid::perturbed(problem.final_time, config.time_steps, config.time_jitter, config.seed)
        .map_err(config_err)?;

    let exact = problem.exact.clone();
    let mut errors: Vec<(f64, f64)> = Vec::with_capacity(grid.steps() + 1);
    let run = advance_with(&space, &problem, &grid, |_, t, u| {
        if let Some(ex) = &exact {
            errors.push((error_l2(&space, u, ex.as_ref(), t)?, error_h1(&space, u, ex.as_ref(), t)?));
        }
        Ok(())
    })
    .map_err(CliError::Solver)?;

    let mut header = vec!["n", "t", "l2_norm", "g_l2", "wall_time"];
    if exact.is_some() {
        header.extend(["err_l2", "err_h1"]);
    }
    let mut rows = Vec::with_capacity(run.records.len() + 1);
    let mut push_row = |n: usize, t: f64, l2: f64, g: f64, wall: f64| {
        let mut row = vec![n.to_string(), format_float(t), format_float(l2), format_float(g), format_float(wall)];
        if let Some(&(el2, eh1)) = errors.get(n) {
            row.push(format_float(el2));
            row.push(format_float(eh1));
        }
        rows.push(row);
    };
    push_row(0, 0.0, run.initial_norm, 0.0, 0.0);
    for r in &run.records {
        let wall = if config.timing { r.wall_time } else { 0.0 };
        push_row(r.n, r.t, r.l2_norm, r.g_l2, wall);
    }
    write_csv(config.csv_output(), &header, &rows)?;

    // ‖U^0‖ + Σ k_j ‖g(t_{j−1/2})‖ − ‖U^n‖, minimized over n
    let mut budget = run.initial_norm;
    let mut margin = f64::INFINITY;
    for r in &run.records {
        budget += grid.step(r.n) * r.g_l2;
        margin = margin.min(budget - r.l2_norm);
    }
    let final_norm = run.records.last().map_or(run.initial_norm, |r| r.l2_norm);
    let summary = json!({
        "command": "run",
        "case": case.name,
        "description": case.description,
        "degree": config.degree,
        "n_dof": space.n_dof(),
        "steps": grid.steps(),
        "h": space.mesh().h(),
        "k": grid.k_max(),
        "initial_norm": run.initial_norm,
        "final_norm": final_norm,
        "mass_drift": run.mass_drift(),
        "boundedness_margin": margin,
        "final_err_l2": errors.last().map(|e| e.0),
        "final_err_h1": errors.last().map(|e| e.1),
        "max_err_l2": errors.iter().map(|e| e.0).reduce(f64::max),
        "factorizations": run.factorizations,
        "solves": run.solves,
        "config": config,
    });
    finish(config, summary, 0)
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("NLS_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Config(Error::InvalidArgument(format!("NLS_THREADS={v:?} is not a positive integer")))),
        Err(_) => Ok(None),
    }
}

pub fn cmd_converge(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate().map_err(config_err)?;
    let case = config.build_case().map_err(config_err)?;
    if config.drop_forcing {
        return Err(CliError::Config(Error::InvalidArgument(
            "converge needs the exact solution; drop_forcing is not allowed".into(),
        )));
    }
    let opts = StudyOptions {
        degrees: config.degree_list(),
        levels: config.levels,
        m0: config.m,
        coupling: config.coupling,
        steps_factor: config.steps_factor,
        time_jitter: config.time_jitter,
        seed: config.seed,
        max_over_steps: config.max_over_steps,
        threads: threads_from_env()?,
    };
    let reports = convergence_study(&case, &opts).map_err(|e| match e {
        Error::InvalidArgument(_) | Error::UnsupportedDegree(_) => CliError::Config(e),
        other => CliError::Solver(other),
    })?;

    let header = ["degree", "level", "h", "k", "err_l2", "rate_l2", "err_h1", "rate_h1", "m", "steps"];
    let mut rows = Vec::new();
    let mut pass = true;
    let mut per_degree = Vec::new();
    for r in &reports {
        for (i, l) in r.levels.iter().enumerate() {
            let rate = |v: &[f64]| if i == 0 { String::new() } else { format_float(v[i - 1]) };
            rows.push(vec![
                r.degree.to_string(),
                i.to_string(),
                format_float(l.h),
                format_float(l.k),
                format_float(l.err_l2),
                rate(&r.rates_l2),
                format_float(l.err_h1),
                rate(&r.rates_h1),
                l.m.to_string(),
                l.steps.to_string(),
            ]);
        }
        let med_l2 = r.median_rate_l2();
        let med_h1 = r.median_rate_h1();
        let ok_l2 = config.min_rate_l2.is_none_or(|t| med_l2.is_some_and(|v| v >= t));
        let ok_h1 = config.min_rate_h1.is_none_or(|t| med_h1.is_some_and(|v| v >= t));
        pass &= ok_l2 && ok_h1;
        per_degree.push(json!({
            "degree": r.degree,
            "median_rate_l2": med_l2,
            "median_rate_h1": med_h1,
            "pass_l2": ok_l2,
            "pass_h1": ok_h1,
            "report": r,
        }));
    }
    write_csv(config.csv_output(), &header, &rows)?;
    let summary = json!({
        "command": "converge",
        "case": case.name,
        "pass": pass,
        "results": per_degree,
        "config": config,
    });
    finish(config, summary, if pass { 0 } else { 3 })
}

pub fn cmd_consistency(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate().map_err(config_err)?;
    let case = config.build_case().map_err(config_err)?;
    let report = consistency_residuals(&case, &config.ks, config.t_base).map_err(|e| match e {
        Error::InvalidArgument(_) => CliError::Config(e),
        other => CliError::Solver(other),
    })?;
    let rows: Vec<Vec<String>> = report
        .ks
        .iter()
        .zip(report.r_half_norms.iter().zip(&report.r_full_norms))
        .map(|(k, (h, f))| vec![format_float(*k), format_float(*h), format_float(*f)])
        .collect();
    write_csv(config.csv_output(), &["k", "r_half", "r_full"], &rows)?;

    let vanishing = |norms: &[f64]| norms.iter().all(|&v| v <= ZERO_RESIDUAL);
    let within = |order: Option<f64>, band: [f64; 2]| order.is_some_and(|o| band[0] <= o && o <= band[1]);
    let pass_half = vanishing(&report.r_half_norms) || within(report.fitted_order_half, config.half_order);
    let pass_full = vanishing(&report.r_full_norms) || within(report.fitted_order_full, config.full_order);
    let pass = pass_half && pass_full;
    let summary = json!({
        "command": "consistency",
        "case": case.name,
        "pass": pass,
        "pass_half": pass_half,
        "pass_full": pass_full,
        "report": report,
        "config": config,
    });
    finish(config, summary, if pass { 0 } else { 3 })
}
