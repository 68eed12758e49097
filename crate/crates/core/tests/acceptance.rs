//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use nems_tlr::circuit::{averaging_check, effective_params, energy_drift, normal_mode_frequencies, CircuitState};
use nems_tlr::cli::{current_curves, elimination_sweep, fitted_order, oracle_discrepancy, oracle_grid, readout_params, theta_t_grid};
use nems_tlr::config::RunConfig;
use nems_tlr::entanglement::{cat_state_check, entropy_series, separability_check_12, CoherentTriple};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn fig3() -> Outcome {
    let p = readout_params(&RunConfig::default()).unwrap();
    let c = current_curves(&p, 200, 10.0).unwrap();
    let last = c.s.len() - 1;
    let saturated = (1..=3).all(|n| (c.analytic[n][last] / n as f64 - 1.0).abs() < 1e-4);
    let ratio = c.ratio_defect();
    let ode = c.residuals().iter().cloned().fold(0.0, f64::max);
    outcome(
        saturated && ratio <= 1e-12 && ode <= 1e-8,
        format!("ratio defect {ratio:.2e} (<= 1e-12), ODE residual {ode:.2e} (<= 1e-8) at 200 points"),
    )
}

fn elimination() -> Outcome {
    let sweep = elimination_sweep(&[1e-1, 1e-2, 1e-3]).unwrap();
    let order = fitted_order(&sweep);
    let at = sweep[1].1;
    let errs: Vec<String> = sweep.iter().map(|(_, e)| format!("{e:.2e}")).collect();
    outcome(
        at < 1e-2 && order >= 1.9,
        format!("errors {} at ratios 1e-1,1e-2,1e-3; fitted order {order:.3} (>= 1.9)", errs.join(", ")),
    )
}

fn entropy_figures() -> Outcome {
    let t = CoherentTriple::uniform(2.0).unwrap();
    let grid = theta_t_grid(201);
    let s = entropy_series(&t, &grid, 30).unwrap();
    let sym = s.iter().map(|e| (e.e_1_n2 - e.e_2_n1).abs()).fold(0.0, f64::max);
    let ends = [s[0], s[s.len() - 1]].iter().flat_map(|e| e.as_array()).fold(0.0, f64::max);
    let tail = s.iter().map(|e| e.tail_bound).fold(0.0, f64::max);
    let terms = s.iter().all(|e| e.terms == 30);
    outcome(
        sym <= 1e-12 && ends <= 1e-10 && tail <= 1e-12 && terms,
        format!("|E1-E2| {sym:.2e}, endpoints {ends:.2e}, tail bound {tail:.2e}, 30 terms: {terms}"),
    )
}

fn oracle() -> Outcome {
    let grid = oracle_grid();
    let worst = oracle_discrepancy(&grid, (30, 30, 30), 0.0).unwrap();
    outcome(
        grid.len() >= 20 && worst <= 1e-6,
        format!("{} points at 30x30x30, max discrepancy {worst:.2e} (<= 1e-6)", grid.len()),
    )
}

fn cat() -> Outcome {
    let t = CoherentTriple::uniform(2.0).unwrap();
    let r = cat_state_check(&t, (30, 30, 30)).unwrap();
    let even = 1.0 - r.even_fidelity;
    let odd = 1.0 - r.odd_fidelity.unwrap_or(0.0);
    let sep = [PI, FRAC_PI_2]
        .iter()
        .map(|&tt| separability_check_12(&t, tt, (30, 30, 30)).unwrap().max_deviation)
        .fold(0.0, f64::max);
    outcome(
        even <= 1e-10 && odd <= 1e-10 && r.odd_fidelity.is_some() && sep <= 1e-8,
        format!("1-F even {even:.2e}, odd {odd:.2e} (<= 1e-10); rho12 deviation {sep:.2e} (<= 1e-8)"),
    )
}

fn classical() -> Outcome {
    let p = RunConfig::default().device;
    let w = effective_params(&p).unwrap().omega_tilde1;
    let x0 = p.gap * 2e-6f64.sqrt();
    let one = CircuitState {
        q1: 1e-18,
        ..Default::default()
    };
    let r = averaging_check(&p, one, x0, 20.0 * w, 400.0, 16).unwrap();
    let (w_lo, _) = normal_mode_frequencies(&p, 0.0);
    let mixed = CircuitState {
        q1: 1e-18,
        p1: 0.0,
        q2: -3e-19,
        p2: 2e-18 * p.l2 * w_lo,
    };
    let drift = energy_drift(&p, mixed, 1000.0, 1e-12).unwrap();
    outcome(
        r.relative_error < 0.02 && drift < 1e-8,
        format!("peak off omega~ by {:.2e} (< 2e-2), energy drift {drift:.2e} per 1e3 periods (< 1e-8)", r.relative_error),
    )
}

fn run_property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> common::Check) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn invariants() -> Outcome {
    use common::*;
    let results = [
        run_property(
            "branch unitarity",
            (disc(4.0), disc(4.0), 0usize..200, -1e3..1e3f64),
            |(b, g, n, t)| branch_unitarity(b, g, n, t),
        ),
        run_property("2pi periodicity", (triple(2.5), -10.0..10.0f64), |(t, tt)| periodicity(t, tt)),
        run_property("beta-gamma symmetry", (triple(2.5), 0.0..7.0f64), |(t, tt)| swap_symmetry(t, tt)),
        run_property("phase invariance", (triple(2.5), 0.0..7.0f64, 0.0..6.3f64), |(t, tt, phi)| {
            phase_invariance(t, tt, phi)
        }),
        run_property("entropy bounds", (triple(2.5), 0.0..7.0f64), |(t, tt)| entropy_bounds(t, tt)),
        run_property("truncated commutator", 2usize..=40, truncated_commutator),
        run_property("evolution unitarity", hermitian_case(), |(d, h, psi, t)| {
            evolution_unitarity(d, &h, &psi, t)
        }),
    ];
    let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    let detail = if failures.is_empty() {
        "7 invariants x 100 randomized cases".to_string()
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("1 current curves", Duration::from_secs(1), fig3),
        ("2 adiabatic elimination", Duration::from_secs(10), elimination),
        ("3 entropy figures", Duration::from_secs(5), entropy_figures),
        ("4 oracle equivalence", Duration::from_secs(300), oracle),
        ("5 cat states", Duration::from_secs(60), cat),
        ("6 classical averaging", Duration::from_secs(30), classical),
        ("7 invariant suite", Duration::from_secs(120), invariants),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let ok = o.passed && took <= budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {name}: {} [{:.2}s of {}s] {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
