//! The cross-check suite run by `sim verify`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::figures::{current_curves, elimination_sweep, fitted_order, readout_params, theta_t_grid};
use crate::circuit::{averaging_check, effective_params_with, energy_drift, normal_mode_frequencies, CircuitState};
use crate::config::RunConfig;
use crate::entanglement::{
    brute_force_state, cat_state_check, conditioned_state, entropy_series, linear_entropies, separability_check_12,
    BruteForceOptions, CoherentTriple,
};
use crate::error::Result;
use crate::fock::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Passes when value ≤ limit.
    AtMost,
    /// Passes when value ≥ limit.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub bound: Bound,
}

impl Check {
    fn at_most(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            bound: Bound::AtMost,
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.limit,
            Bound::AtLeast => self.value >= self.limit,
        }
    }
}

/// Twenty (triple, θt) points with every amplitude at most 2 in modulus.
pub fn oracle_grid() -> Vec<(CoherentTriple, f64)> {
    let c = Complex64::new;
    let triples = [
        (c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)),
        (c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)),
        (c(0.5, 0.0), c(1.5, 0.0), c(2.0, 0.0)),
        (c(1.0, 1.0), c(2.0, 0.0), c(0.0, 0.5)),
        (c(1.5, 0.0), c(-1.0, 1.0), c(1.0, -1.5)),
    ];
    let mut grid = Vec::new();
    for (a, b, g) in triples {
        for tt in [0.5, FRAC_PI_2, 2.2, PI] {
            grid.push((
                CoherentTriple {
                    alpha: a,
                    beta: b,
                    gamma: g,
                },
                tt,
            ));
        }
    }
    grid
}

/// Largest componentwise gap between analytic and partial-trace entropies
/// over `grid`. The analytic side runs at phase (1 + `theta_perturbation`)·θt.
pub fn oracle_discrepancy(
    grid: &[(CoherentTriple, f64)],
    dims: (usize, usize, usize),
    theta_perturbation: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (triple, tt) in grid {
        let psi = brute_force_state(triple, *tt, dims, &BruteForceOptions::default())?;
        let brute = [
            psi.reduced_density(&[Mode::Nems])?.linear_entropy(),
            psi.reduced_density(&[Mode::Tlr1])?.linear_entropy(),
            psi.reduced_density(&[Mode::Tlr2])?.linear_entropy(),
        ];
        let analytic = linear_entropies(&conditioned_state(triple, (1.0 + theta_perturbation) * tt, dims.0)?).as_array();
        for k in 0..3 {
            worst = worst.max((analytic[k] - brute[k]).abs());
        }
    }
    Ok(worst)
}

pub fn run_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();

    let p = readout_params(cfg)?;
    let curves = current_curves(&p, cfg.readout.points, cfg.readout.span)?;
    checks.push(Check::at_most("current_ratio_defect", curves.ratio_defect(), tol.current_ratio));
    let res = curves.residuals();
    checks.push(Check::at_most(
        "current_ode_residual",
        res.iter().cloned().fold(0.0, f64::max),
        tol.current_ode,
    ));

    let sweep = elimination_sweep(&[1e-1, 1e-2, 1e-3])?;
    checks.push(Check::at_most("elimination_error_at_1e-2", sweep[1].1, tol.elimination));
    checks.push(Check {
        name: "elimination_order",
        value: fitted_order(&sweep),
        limit: tol.elimination_order,
        bound: Bound::AtLeast,
    });

    let triple = cfg.entropy.triple;
    let grid = theta_t_grid(cfg.entropy.theta_t_points);
    let series = entropy_series(&triple, &grid, cfg.entropy.terms)?;
    let swapped = entropy_series(&triple.swapped(), &grid, cfg.entropy.terms)?;
    let symmetry = series
        .iter()
        .zip(&swapped)
        .map(|(a, b)| (a.e_1_n2 - b.e_2_n1).abs().max((a.e_n_12 - b.e_n_12).abs()))
        .fold(0.0, f64::max);
    checks.push(Check::at_most("entropy_swap_symmetry", symmetry, tol.entropy_symmetry));
    let ends = [series[0], *series.last().expect("at least two phases")];
    let recurrence = ends
        .iter()
        .flat_map(|e| e.as_array())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("entropy_recurrence", recurrence, tol.recurrence));
    let tail = series.iter().map(|e| e.tail_bound).fold(0.0, f64::max);
    checks.push(Check::at_most("entropy_tail_bound", tail, tol.tail));

    let dims = (cfg.entropy.oracle_nems_dim, cfg.entropy.oracle_tlr_dim, cfg.entropy.oracle_tlr_dim);
    checks.push(Check::at_most(
        "oracle_max_discrepancy",
        oracle_discrepancy(&oracle_grid(), dims, cfg.verify_theta_perturbation)?,
        tol.oracle,
    ));

    let cat = cat_state_check(&triple, dims)?;
    checks.push(Check::at_most("cat_even_fidelity_defect", 1.0 - cat.even_fidelity, tol.cat));
    if let Some(f) = cat.odd_fidelity {
        checks.push(Check::at_most("cat_odd_fidelity_defect", 1.0 - f, tol.cat));
    }
    checks.push(Check::at_most("cat_norm_defect", (cat.reassembled_norm - 1.0).abs(), tol.cat));

    let mut sep: f64 = 0.0;
    for tt in [FRAC_PI_2, PI] {
        sep = sep.max(separability_check_12(&triple, tt, dims)?.max_deviation);
    }
    checks.push(Check::at_most("separability_max_deviation", sep, tol.separability));

    let (averaging, drift) = classical_checks(cfg)?;
    checks.push(Check::at_most("classical_peak_error", averaging, tol.classical));
    checks.push(Check::at_most("classical_energy_drift", drift, tol.energy_drift));
    Ok(checks)
}

/// Beam amplitude and rate for the classical run: x₀²/(2d²) = 10⁻⁶ and
/// ν = 20·ω̃ unless configured.
pub fn classical_drive(cfg: &RunConfig) -> Result<(f64, f64)> {
    let eff = effective_params_with(&cfg.device, &cfg.effective)?;
    let x0 = cfg.classical.x0.unwrap_or(cfg.device.gap * 2e-6f64.sqrt());
    let nu = cfg.classical.nu.unwrap_or(20.0 * eff.omega_tilde1);
    Ok((x0, nu))
}

fn classical_checks(cfg: &RunConfig) -> Result<(f64, f64)> {
    let p = &cfg.device;
    let (x0, nu) = classical_drive(cfg)?;
    let one = CircuitState {
        q1: 1e-18,
        ..Default::default()
    };
    let r = averaging_check(p, one, x0, nu, cfg.classical.periods, cfg.classical.samples_per_period)?;
    let (w_lo, _) = normal_mode_frequencies(p, 0.0);
    let mixed = CircuitState {
        q1: 1e-18,
        p1: 0.0,
        q2: -3e-19,
        p2: 2e-18 * p.l2 * w_lo,
    };
    let drift = energy_drift(p, mixed, cfg.classical.energy_periods, 1e-12)?;
    Ok((r.relative_error, drift))
}
