//! Curve data behind the current and entropy figures.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::RunConfig;
use crate::circuit::effective_params_with;
use crate::entanglement::{entropy_series, CoherentTriple, EntropyReport};
use crate::error::Result;
use crate::format::CsvTable;
use crate::ode::linspace;
use crate::readout::{
    elimination_check, integrate_mean_qsde, mean_photocurrent, ReadoutParams, RegimeMode,
};

/// Readout parameters for the configured device, filling in κ₂ = 100·θ₀,
/// κ₁ = Γ and α₂ = 10 where the config leaves them out.
pub fn readout_params(cfg: &RunConfig) -> Result<ReadoutParams> {
    let eff = effective_params_with(&cfg.device, &cfg.effective)?;
    let kappa2 = cfg.readout.kappa2.unwrap_or(100.0 * eff.theta0);
    let kappa1 = cfg.readout.kappa1.unwrap_or(2.0 * eff.theta0 * eff.theta0 / kappa2);
    let drive = cfg.readout.drive.unwrap_or(Complex64::new(0.0, 5.0 * kappa2));
    let mut p = ReadoutParams::from_device(&eff, &cfg.device, drive, kappa1, kappa2, cfg.resonance_tol)?;
    p.mode = if cfg.readout.strict { RegimeMode::Strict } else { RegimeMode::Permissive };
    Ok(p)
}

/// Normalized current curves I/G against s = (κ₁ + Γ)t/2 for n_b = 0..=3,
/// with the mean-ODE solution alongside.
#[derive(Debug, Clone)]
pub struct CurrentCurves {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    /// Closed form, index n_b.
    pub analytic: [Vec<f64>; 4],
    /// Integrated mean equation, index n_b.
    pub ode: [Vec<f64>; 4],
    pub gain: f64,
}

impl CurrentCurves {
    /// max over samples of |ODE − closed form|/|closed form| (absolute where
    /// the closed form vanishes), per n_b.
    pub fn residuals(&self) -> [f64; 4] {
        std::array::from_fn(|n| {
            self.analytic[n]
                .iter()
                .zip(&self.ode[n])
                .map(|(a, o)| if *a == 0.0 { o.abs() } else { (o - a).abs() / a.abs() })
                .fold(0.0, f64::max)
        })
    }

    /// |I_k/I_1 − k| at the last sample, worst of k = 2, 3.
    pub fn ratio_defect(&self) -> f64 {
        let last = self.s.len() - 1;
        let base = self.analytic[1][last];
        (2..=3)
            .map(|k| (self.analytic[k][last] / base - k as f64).abs())
            .fold(0.0, f64::max)
    }

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "I_nb1", "I_nb2", "I_nb3"]);
        for i in 0..self.s.len() {
            t.push(vec![self.s[i], self.analytic[1][i], self.analytic[2][i], self.analytic[3][i]]);
        }
        t
    }

    pub fn check_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "s", "t_s", "I_nb0", "I_nb1_ode", "I_nb2_ode", "I_nb3_ode", "residual_nb1", "residual_nb2", "residual_nb3",
        ]);
        for i in 0..self.s.len() {
            let res = |n: usize| {
                let a = self.analytic[n][i];
                let o = self.ode[n][i];
                if a == 0.0 {
                    o.abs()
                } else {
                    (o - a).abs() / a.abs()
                }
            };
            t.push(vec![
                self.s[i],
                self.t[i],
                self.analytic[0][i],
                self.ode[1][i],
                self.ode[2][i],
                self.ode[3][i],
                res(1),
                res(2),
                res(3),
            ]);
        }
        t
    }
}

pub fn current_curves(p: &ReadoutParams, points: usize, span: f64) -> Result<CurrentCurves> {
    let s = linspace(0.0, span, points);
    let rate = p.total_rate();
    let t: Vec<f64> = s.iter().map(|s| 2.0 * s / rate).collect();
    let gain = p.stationary_gain();
    let mut analytic: [Vec<f64>; 4] = Default::default();
    let mut ode: [Vec<f64>; 4] = Default::default();
    for n in 0..4 {
        let nb = n as f64;
        analytic[n] = t
            .iter()
            .map(|&t| mean_photocurrent(t, nb, p).map(|i| i / gain))
            .collect::<Result<_>>()?;
        ode[n] = integrate_mean_qsde(p, nb, Complex64::new(0.0, 0.0), &t)?
            .into_iter()
            .map(|a| p.current_from_amplitude(a) / gain)
            .collect();
    }
    Ok(CurrentCurves { s, t, analytic, ode, gain })
}

/// Dimensionless two-mode model used for the elimination sweep: κ₁ = κ₂ = 1,
/// α₂ = 1, θ = −10⁻³θ₀. The device ratio θ/θ₀ ≈ −10⁻⁶ would leave the
/// phonon-dependent part of ⟨a₁⟩ buried under the θ₀ offset at double
/// precision, so the sweep uses a larger ratio; the eliminated result is
/// linear in θ either way.
pub fn elimination_model(theta0_over_kappa2: f64) -> ReadoutParams {
    ReadoutParams {
        drive: Complex64::new(0.0, 0.5),
        kappa1: 1.0,
        kappa2: 1.0,
        theta0: theta0_over_kappa2,
        theta: -1e-3 * theta0_over_kappa2,
        omega_tilde: 1.0,
        inductance: 1.0,
        hbar: 1.0,
        mode: RegimeMode::Permissive,
    }
}

/// Relative elimination error at each θ₀/κ₂.
pub fn elimination_sweep(ratios: &[f64]) -> Result<Vec<(f64, f64)>> {
    ratios
        .iter()
        .map(|&r| elimination_check(&elimination_model(r), 1.0, 1e-13).map(|c| (r, c.relative_error)))
        .collect()
}

/// Least-squares slope of log(error) against log(ratio).
pub fn fitted_order(sweep: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = sweep.iter().map(|(r, e)| (r.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn theta_t_grid(points: usize) -> Vec<f64> {
    linspace(0.0, 2.0 * PI, points)
}

/// E_{N|12} over θt ∈ [0, 2π] and real α = β = γ ∈ [0, alpha_max].
pub fn entropy_grid(theta_ts: &[f64], alphas: &[f64], terms: usize) -> Result<CsvTable> {
    let mut t = CsvTable::new(&["theta_t", "abs_alpha", "E_N12"]);
    for &a in alphas {
        let triple = CoherentTriple::uniform(a)?;
        for (tt, e) in theta_ts.iter().zip(entropy_series(&triple, theta_ts, terms)?) {
            t.push(vec![*tt, a, e.e_n_12]);
        }
    }
    Ok(t)
}

pub fn entropy_table(theta_ts: &[f64], series: &[EntropyReport]) -> CsvTable {
    let mut t = CsvTable::new(&["theta_t", "E_N12", "E_1N2", "E_2N1"]);
    for (tt, e) in theta_ts.iter().zip(series) {
        t.push(vec![*tt, e.e_n_12, e.e_1_n2, e.e_2_n1]);
    }
    t
}

/// The four inset initial states, all with α = 2.
pub fn inset_triples() -> [CoherentTriple; 4] {
    let c = Complex64::new;
    let alpha = c(2.0, 0.0);
    [
        CoherentTriple {
            alpha,
            beta: c(2.0, 0.0),
            gamma: c(2.0, 0.0),
        },
        CoherentTriple {
            alpha,
            beta: c(3.0, 0.0),
            gamma: c(4.0, 0.0),
        },
        CoherentTriple {
            alpha,
            beta: c(1.0, 2.0),
            gamma: c(1.0, 2.0),
        },
        CoherentTriple {
            alpha,
            beta: c(3.0, 4.0),
            gamma: c(1.0, 2.0),
        },
    ]
}
