//! Subcommands of the `sim` binary. Each one reads a [`RunConfig`], writes
//! its CSV files into the output directory and returns a printable summary.

pub mod figures;
pub mod verify;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::circuit::{
    averaging_check, effective_params_with, normal_mode_frequencies, simulate_classical_circuit, x_rms, CircuitState,
    ClassicalCircuitConfig, TimeFunction,
};
use crate::config::RunConfig;
use crate::entanglement::{cat_state_check, entropy_series};
use crate::error::{input, Result};
use crate::format::{c_exp, write_atomic};
use crate::ode::linspace;

pub use figures::*;
pub use verify::{oracle_discrepancy, oracle_grid, run_checks, Bound, Check};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Params,
    Current,
    Entropy,
    Cat,
    Classical,
    Verify,
}

impl Command {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "params" => Self::Params,
            "current" => Self::Current,
            "entropy" => Self::Entropy,
            "cat" => Self::Cat,
            "classical" => Self::Classical,
            "verify" => Self::Verify,
            other => return input(format!("unknown subcommand '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub summary: String,
    pub files: Vec<PathBuf>,
    /// False only when `verify` found a failing check.
    pub passed: bool,
}

/// Two-column `quantity,value` report.
fn write_pairs(path: &Path, rows: &[(&str, f64)]) -> Result<()> {
    let mut s = String::from("quantity,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k},{}", c_exp(*v));
    }
    write_atomic(path, s.as_bytes())
}

fn summarize(rows: &[(&str, f64)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {}\n", c_exp(*v))).collect()
}

pub fn run(cmd: Command, cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    fs::create_dir_all(out)?;
    match cmd {
        Command::Params => cmd_params(cfg, out),
        Command::Current => cmd_current(cfg, out),
        Command::Entropy => cmd_entropy(cfg, out),
        Command::Cat => cmd_cat(cfg, out),
        Command::Classical => cmd_classical(cfg, out),
        Command::Verify => cmd_verify(cfg, out),
    }
}

pub fn cmd_params(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let eff = effective_params_with(&cfg.device, &cfg.effective)?;
    let omega = eff.resonant_frequency(cfg.resonance_tol)?;
    let p = readout_params(cfg)?;
    let regime = p.regime();
    let rows = [
        ("C_eq", eff.ceq),
        ("Ctilde1", eff.ctilde1),
        ("Ctilde2", eff.ctilde2),
        ("omega1_rad_s", eff.omega1),
        ("omega2_rad_s", eff.omega2),
        ("omega_eq1_rad_s", eff.omega_eq1),
        ("omega_eq2_rad_s", eff.omega_eq2),
        ("omega_tilde1_rad_s", eff.omega_tilde1),
        ("omega_tilde2_rad_s", eff.omega_tilde2),
        ("omega_tilde_rad_s", omega),
        ("theta0_rad_s", eff.theta0),
        ("theta_rad_s", eff.theta),
        ("theta_over_theta0", eff.theta_ratio()),
        ("x_rms_m", x_rms(&cfg.device, eff.mean_phonon_number)?),
        ("x_rms_sq_over_d_sq", eff.x_rms_sq_over_d_sq),
        ("kappa1_rad_s", p.kappa1),
        ("kappa2_rad_s", p.kappa2),
        ("Gamma_rad_s", p.gamma()),
        ("alpha2_abs", p.alpha2().norm()),
        ("theta0_over_kappa2", regime.theta0_over_kappa2),
        ("theta_over_kappa2", regime.theta_over_kappa2),
        ("regime_ok", if regime.satisfied() { 1.0 } else { 0.0 }),
    ];
    let path = out.join("params.csv");
    write_pairs(&path, &rows)?;
    Ok(Outcome {
        summary: summarize(&rows),
        files: vec![path],
        passed: true,
    })
}

pub fn cmd_current(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let p = readout_params(cfg)?;
    let regime = p.check_regime()?;
    let curves = current_curves(&p, cfg.readout.points, cfg.readout.span)?;
    let main = out.join("fig3_current.csv");
    let check = out.join("fig3_current_check.csv");
    curves.table().write_atomic(&main)?;
    curves.check_table().write_atomic(&check)?;
    let res = curves.residuals();
    let rows = [
        ("gain_A_per_phonon", curves.gain),
        ("ratio_defect", curves.ratio_defect()),
        ("max_ode_residual", res.iter().cloned().fold(0.0, f64::max)),
    ];
    let mut summary = String::new();
    if !regime.satisfied() {
        let _ = writeln!(
            summary,
            "warning: outside the elimination regime (theta0/kappa2 = {}, |theta|/kappa2 = {})",
            c_exp(regime.theta0_over_kappa2),
            c_exp(regime.theta_over_kappa2)
        );
    }
    summary.push_str(&summarize(&rows));
    Ok(Outcome {
        summary,
        files: vec![main, check],
        passed: true,
    })
}

pub fn cmd_entropy(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let e = &cfg.entropy;
    let grid = theta_t_grid(e.theta_t_points);
    let alphas = linspace(0.0, e.alpha_max, e.alpha_points);
    let mut files = Vec::new();

    let fig4 = out.join("fig4_entropy_grid.csv");
    entropy_grid(&grid, &alphas, e.terms)?.write_atomic(&fig4)?;
    files.push(fig4);

    let series = entropy_series(&e.triple, &grid, e.terms)?;
    let fig5 = out.join("fig5_entropies.csv");
    entropy_table(&grid, &series).write_atomic(&fig5)?;
    files.push(fig5);

    for (k, triple) in inset_triples().iter().enumerate() {
        let path = out.join(format!("fig5_inset_{}.csv", k + 1));
        entropy_table(&grid, &entropy_series(triple, &grid, e.terms)?).write_atomic(&path)?;
        files.push(path);
    }
    let tail = series.iter().map(|r| r.tail_bound).fold(0.0, f64::max);
    let rows = [
        ("terms", series[0].terms as f64),
        ("tail_bound", tail),
        ("max_E_N12", series.iter().map(|r| r.e_n_12).fold(0.0, f64::max)),
    ];
    Ok(Outcome {
        summary: summarize(&rows),
        files,
        passed: true,
    })
}

pub fn cmd_cat(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let e = &cfg.entropy;
    let r = cat_state_check(&e.triple, (e.oracle_nems_dim, e.oracle_tlr_dim, e.oracle_tlr_dim))?;
    let rows = [
        ("even_weight", r.even_weight),
        ("odd_weight", r.odd_weight),
        ("projector_overlap", r.projector_overlap),
        ("even_fidelity", r.even_fidelity),
        ("odd_fidelity", r.odd_fidelity.unwrap_or(f64::NAN)),
        ("reassembled_norm", r.reassembled_norm),
        ("reassembled_fidelity", r.reassembled_fidelity),
    ];
    let path = out.join("cat_report.csv");
    write_pairs(&path, &rows)?;
    Ok(Outcome {
        summary: summarize(&rows),
        files: vec![path],
        passed: true,
    })
}

pub fn cmd_classical(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let p = cfg.device;
    let (x0, nu) = verify::classical_drive(cfg)?;
    let one = CircuitState {
        q1: 1e-18,
        ..Default::default()
    };
    let c = &cfg.classical;
    let r = averaging_check(&p, one, x0, nu, c.periods, c.samples_per_period)?;

    let eff = effective_params_with(&p, &cfg.effective)?;
    let period = 2.0 * std::f64::consts::PI / eff.omega_tilde1;
    let samples = (c.periods * c.samples_per_period as f64).ceil() as usize + 1;
    let mut sim = ClassicalCircuitConfig::new(p, one, c.periods * period, samples);
    sim.x_drive = TimeFunction::Cosine {
        amplitude: x0,
        rate: nu,
        phase: 0.0,
    };
    let traj = out.join("classical_trajectory.csv");
    simulate_classical_circuit(&sim)?.to_csv().write_atomic(&traj)?;

    let (lo0, hi0) = normal_mode_frequencies(&p, 0.0);
    let rows = [
        ("x0_m", x0),
        ("nu_rad_s", nu),
        ("peak_rad_s", r.peak),
        ("omega_tilde_rad_s", r.omega_tilde),
        ("relative_error", r.relative_error),
        ("mode_lo_static_rad_s", lo0),
        ("mode_hi_static_rad_s", hi0),
        ("mode_lo_averaged_rad_s", r.averaged_modes.0),
        ("mode_hi_averaged_rad_s", r.averaged_modes.1),
        ("mode_error", r.mode_error),
    ];
    let report = out.join("classical_report.csv");
    write_pairs(&report, &rows)?;
    Ok(Outcome {
        summary: summarize(&rows),
        files: vec![traj, report],
        passed: true,
    })
}

pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let checks = run_checks(cfg)?;
    let mut csv = String::from("check,value,limit,bound,passed\n");
    let mut summary = String::new();
    for c in &checks {
        let bound = match c.bound {
            Bound::AtMost => "at_most",
            Bound::AtLeast => "at_least",
        };
        let _ = writeln!(csv, "{},{},{},{bound},{}", c.name, c_exp(c.value), c_exp(c.limit), c.passed());
        let _ = writeln!(
            summary,
            "{} {:<28} {} ({bound} {})",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c_exp(c.value),
            c_exp(c.limit)
        );
    }
    let path = out.join("verify_report.csv");
    write_atomic(&path, csv.as_bytes())?;
    Ok(Outcome {
        summary,
        files: vec![path],
        passed: checks.iter().all(Check::passed),
    })
}
