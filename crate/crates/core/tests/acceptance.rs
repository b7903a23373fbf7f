//! End-to-end acceptance checks. Prints one `[PASS]`/`[FAIL]` line per
//! criterion and exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use nls_fem::assembly::nonlinearity_lipschitz_check;
use nls_fem::fe::{build_uniform_mesh, FeSpace};
use nls_fem::field::{FnField, Partial, ZeroField};
use nls_fem::projection::ritz_project;
use nls_fem::verification::*;
use nls_fem::{advance, BandedLu, FieldVector, NlsProblem, Nonlinearity, TimeGrid};
use rand::Rng;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn study(degree: usize, levels: usize, coupling: Coupling, jitter: f64) -> (EocReport, Duration) {
    let case = builtin_case("ms1").unwrap();
    let opts = StudyOptions {
        degrees: vec![degree],
        levels,
        m0: 8,
        coupling,
        time_jitter: jitter,
        seed: 2024,
        ..StudyOptions::default()
    };
    let start = Instant::now();
    let rep = convergence_study(&case, &opts).unwrap().remove(0);
    (rep, start.elapsed())
}

fn fmt_rates(r: &[f64]) -> String {
    r.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ")
}

fn c1_l2_p1() -> Outcome {
    let (rep, t) = study(1, 5, Coupling::KPropH, 0.0);
    let med = rep.median_rate_l2().unwrap();
    outcome(
        med >= 1.9 && secs(t) < 30.0,
        format!("ms1 P1 k~h m=8..128: median L2 EOC {med:.4} (rates {}), {:.2} s", fmt_rates(&rep.rates_l2), secs(t)),
    )
}

fn c2_l2_p2() -> Outcome {
    let (rep, t) = study(2, 4, Coupling::KPropHR2, 0.0);
    let med = rep.median_rate_l2().unwrap();
    outcome(
        med >= 2.8 && secs(t) < 60.0,
        format!("ms1 P2 k~h^1.5 m=8..64: median L2 EOC {med:.4} (rates {}), {:.2} s", fmt_rates(&rep.rates_l2), secs(t)),
    )
}

fn c3_h1_p1() -> Outcome {
    let (rep, _) = study(1, 5, Coupling::KPropH, 0.0);
    let med = rep.median_rate_h1().unwrap();
    outcome(med >= 0.9, format!("ms1 P1 k~h: median H1 EOC {med:.4} (rates {})", fmt_rates(&rep.rates_h1)))
}

fn c4_consistency() -> Outcome {
    let case = builtin_case("ms1").unwrap();
    let ks: Vec<f64> = (3..=9).map(|j| 2f64.powi(-j)).collect();
    let start = Instant::now();
    let rep = consistency_residuals(&case, &ks, 0.3).unwrap();
    let t = secs(start.elapsed());
    let full = rep.fitted_order_full.unwrap_or(f64::NAN);
    let half = rep.fitted_order_half.unwrap_or(f64::NAN);
    outcome(
        (1.9..=2.1).contains(&full) && (0.9..=1.1).contains(&half) && t < 5.0,
        format!("ms1 k=2^-3..2^-9: full-step order {full:.4}, half-step order {half:.4}, {t:.2} s"),
    )
}

fn c5_mass() -> Outcome {
    let free = builtin_case("free1").unwrap().problem;
    let unforced = builtin_case("ms1").unwrap().problem.without_forcing();
    let space = FeSpace::new(build_uniform_mesh(0.0, 1.0, 64).unwrap(), 1).unwrap();
    let grid = TimeGrid::uniform(1.0, 200).unwrap();
    let drifts: Vec<f64> = [free, unforced]
        .iter()
        .map(|p| advance(&space, p, &grid).unwrap().mass_drift())
        .collect();
    outcome(
        drifts.iter().all(|&d| d <= 1e-10),
        format!("200 steps: max drift free1 {:.3e}, ms1 without g {:.3e}", drifts[0], drifts[1]),
    )
}

fn c6_boundedness() -> Outcome {
    let case = builtin_case("ms1").unwrap();
    let space = FeSpace::new(build_uniform_mesh(0.0, 1.0, 32).unwrap(), 1).unwrap();
    let grid = TimeGrid::uniform(1.0, 100).unwrap();
    let out = advance(&space, &case.problem, &grid).unwrap();
    let mut budget = out.initial_norm;
    let mut margin = f64::INFINITY;
    for r in &out.records {
        let g = field_l2_norm(&space, case.problem.forcing.as_ref(), grid.midpoint(r.n)).unwrap();
        budget += grid.step(r.n) * g;
        margin = margin.min(budget + 1e-8 - r.l2_norm);
    }
    outcome(margin >= 0.0, format!("ms1 100 steps: smallest margin {margin:.4e}"))
}

fn c7_ritz() -> Outcome {
    let v = FnField::new(|_, x| c((PI * x).sin(), 0.0)).with_partial(Partial::X, |_, x| c(PI * (PI * x).cos(), 0.0));
    let (mut e0, mut e1) = (Vec::new(), Vec::new());
    for m in [8, 16, 32, 64] {
        let s = FeSpace::new(build_uniform_mesh(0.0, 1.0, m).unwrap(), 1).unwrap();
        let r = ritz_project(&s, &v, 0.0).unwrap();
        e0.push(error_l2(&s, &r, &v, 0.0).unwrap());
        e1.push(error_h1(&s, &r, &v, 0.0).unwrap());
    }
    let (r0, r1) = (halving_rates(&e0), halving_rates(&e1));
    let min0 = r0.iter().cloned().fold(f64::INFINITY, f64::min);
    let min1 = r1.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        min0 >= 1.95 && min1 >= 0.95,
        format!("sin(pi x) P1 m=8..64: L2 EOC {} / H1 EOC {}", fmt_rates(&r0), fmt_rates(&r1)),
    )
}

fn c8_lipschitz() -> Outcome {
    let mut r = rng(8);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let m = r.gen_range(2..=40);
        let space = FeSpace::new(build_uniform_mesh(0.0, 1.0, m).unwrap(), 1).unwrap();
        let lambda = r.gen_range(-5.0..5.0);
        let scale = 10f64.powf(r.gen_range(-2.0..1.0));
        // interpolants of random trigonometric sums
        let mut field = || {
            let coef: Vec<_> = (1..=4).map(|_| scale * random_complex(&mut r)).collect();
            FnField::new(move |_, x| coef.iter().enumerate().map(|(j, a)| a * ((j + 1) as f64 * PI * x).sin()).sum())
        };
        let (f1, f2) = (field(), field());
        let u1: FieldVector = space.interpolate(&f1, 0.0);
        let u2: FieldVector = space.interpolate(&f2, 0.0);
        let chk = nonlinearity_lipschitz_check(&space, &u1, &u2, &Nonlinearity::cubic(lambda), 16).unwrap();
        if !chk.holds() {
            failures += 1;
        }
        if chk.rhs > 0.0 {
            worst = worst.max(chk.lhs / chk.rhs);
        }
    }
    outcome(failures == 0, format!("500 random pairs: {failures} violations, max lhs/rhs {worst:.4}"))
}

fn c9_oracle() -> Outcome {
    // Cubic u0: its derivative is integrated exactly, so the Ritz load matches the closed form.
    let u0 = |x: f64| c(x * (1.0 - x), x * x * (1.0 - x));
    let du0 = |x: f64| c(1.0 - 2.0 * x, 2.0 * x - 3.0 * x * x);
    let mut worst = 0.0f64;
    for m in 2..=51 {
        for k in [1e-3, 0.05, 1.0] {
            let problem = NlsProblem {
                domain: (0.0, 1.0),
                final_time: k,
                nonlinearity: Nonlinearity::zero(),
                forcing: Arc::new(ZeroField),
                initial: Arc::new(FnField::new(move |_, x| u0(x)).with_partial(Partial::X, move |_, x| du0(x))),
                exact: None,
            };
            let space = FeSpace::new(build_uniform_mesh(0.0, 1.0, m).unwrap(), 1).unwrap();
            let out = advance(&space, &problem, &TimeGrid::uniform(k, 1).unwrap()).unwrap();
            let h = 1.0 / m as f64;
            let (mass, stiff) = dense_p1_matrices(m, h);
            let oracle = dense_cn_step(&mass, &stiff, &dense_p1_ritz(m, h, u0), k);
            worst = worst.max(max_diff(&out.final_state, &oracle));
        }
    }
    outcome(worst <= 1e-11, format!("f=0, g=0, n=1..50, three step sizes: max |U1 - oracle| {worst:.3e}"))
}

fn c10_linalg() -> Outcome {
    let mut r = rng(10);
    let mut worst_res = 0.0f64;
    for _ in 0..100 {
        let n = r.gen_range(1..=200);
        let (kl, ku) = (r.gen_range(0..=5), r.gen_range(0..=5));
        let a = random_banded(&mut r, n, kl, ku);
        let b = random_vector(&mut r, n);
        let x = BandedLu::factor(&a).unwrap().solve(&b).unwrap();
        let ax = a.matvec(&x).unwrap();
        worst_res = worst_res.max(max_diff(&ax, &b) / norm(&b));
    }
    let mut worst_oracle = 0.0f64;
    for n in 1..=50 {
        let (kl, ku) = (r.gen_range(0..=4), r.gen_range(0..=4));
        let a = random_banded(&mut r, n, kl, ku);
        let b = random_vector(&mut r, n);
        let x = a.lu().unwrap().solve(&b).unwrap();
        let y = dense_solve(&a.to_dense(), &b);
        worst_oracle = worst_oracle.max(max_diff(&x, &y) / norm(&y));
    }
    outcome(
        worst_res <= 1e-11 && worst_oracle <= 1e-11,
        format!("100 round-trips: max relative residual {worst_res:.3e}; dense oracle n<=50: max relative difference {worst_oracle:.3e}"),
    )
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(
        &cfg,
        r#"{"case": "ms1", "degree": 2, "m": 24, "mesh_jitter": 0.2, "time_steps": 40, "time_jitter": 0.3, "seed": 17}"#,
    )
    .unwrap();
    let outputs: Vec<Vec<u8>> = ["a.csv", "b.csv"]
        .iter()
        .map(|name| {
            let csv = dir.path().join(name);
            let status = Command::new(env!("CARGO_BIN_EXE_nls-fem"))
                .args(["run", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap()])
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(csv).unwrap()
        })
        .collect();
    outcome(
        outputs[0] == outputs[1] && !outputs[0].is_empty(),
        format!("two invocations, {} bytes each, identical: {}", outputs[0].len(), outputs[0] == outputs[1]),
    )
}

fn c12_jitter() -> Outcome {
    let (rep, _) = study(1, 5, Coupling::KPropH, 0.3);
    let med = rep.median_rate_l2().unwrap();
    outcome(
        med >= 1.85,
        format!("ms1 P1 k~h m=8..128, time jitter 0.3: median L2 EOC {med:.4} (rates {})", fmt_rates(&rep.rates_l2)),
    )
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("L2 convergence, P1", c1_l2_p1),
        ("L2 convergence, P2", c2_l2_p2),
        ("H1 convergence, P1", c3_h1_p1),
        ("consistency orders", c4_consistency),
        ("mass conservation", c5_mass),
        ("discrete boundedness", c6_boundedness),
        ("Ritz projection rates", c7_ritz),
        ("Lipschitz inequality", c8_lipschitz),
        ("dense Crank-Nicolson oracle", c9_oracle),
        ("banded linear algebra", c10_linalg),
        ("determinism", c11_determinism),
        ("non-uniform time grids", c12_jitter),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] C{:<2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
