//! Phonon-number readout through the mean photocurrent of resonator 1.
//!
//! Resonator 2 is driven on resonance with amplitude F and relaxes to the
//! coherent amplitude α₂ = −2iF/κ₂. Its residual exchange with resonator 1
//! appears as an extra damping Γ = 2θ₀²/κ₂, and the phonon-conditioned
//! coupling θ·α₂·b†b acts as a constant force on ⟨a₁⟩:
//!
//! ```text
//! d⟨a₁⟩/dt = −iθα₂n_b − (κ₁ + Γ)/2 · ⟨a₁⟩
//! ```
//!
//! Noise inputs enter only through their vanishing means.

use num_complex::Complex64;

use crate::circuit::params::{EffectiveParams, PhysicalCircuitParams};
use crate::error::{input, Error, Result};
use crate::ode::{integrate, IntegratorOptions};

/// Ratio above which θ₀/κ₂ or |θ|/κ₂ no longer counts as small.
pub const REGIME_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegimeMode {
    /// Fail when the adiabatic-elimination ratios reach [`REGIME_LIMIT`].
    Strict,
    /// Report the ratios and carry on.
    #[default]
    Permissive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutParams {
    /// Drive amplitude F on resonator 2 (rad/s).
    pub drive: Complex64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub theta0: f64,
    pub theta: f64,
    /// Common resonator frequency ω̃ (rad/s).
    pub omega_tilde: f64,
    /// Inductance of the measured resonator, L₁ (H).
    pub inductance: f64,
    pub hbar: f64,
    pub mode: RegimeMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub theta0_over_kappa2: f64,
    pub theta_over_kappa2: f64,
}

impl RegimeReport {
    pub fn satisfied(&self) -> bool {
        self.theta0_over_kappa2 < REGIME_LIMIT && self.theta_over_kappa2 < REGIME_LIMIT
    }
}

/// α₂ = −2iF/κ₂, real whenever F is purely imaginary.
pub fn steady_alpha2(drive: Complex64, kappa2: f64) -> Result<Complex64> {
    if !(kappa2 > 0.0 && kappa2.is_finite()) {
        return input(format!("kappa2 must be positive, got {kappa2}"));
    }
    Ok(Complex64::new(0.0, -2.0) * drive / kappa2)
}

impl ReadoutParams {
    /// Binds the couplings and ω̃ of a resonant device; the measured
    /// resonator is TLR-1, so L = L₁.
    pub fn from_device(
        eff: &EffectiveParams,
        p: &PhysicalCircuitParams,
        drive: Complex64,
        kappa1: f64,
        kappa2: f64,
        resonance_tol: f64,
    ) -> Result<Self> {
        let r = Self {
            drive,
            kappa1,
            kappa2,
            theta0: eff.theta0,
            theta: eff.theta,
            omega_tilde: eff.resonant_frequency(resonance_tol)?,
            inductance: p.l1,
            hbar: p.hbar,
            mode: RegimeMode::Permissive,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("omega_tilde", self.omega_tilde),
            ("inductance", self.inductance),
            ("hbar", self.hbar),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return input(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.theta0.is_finite() && self.theta.is_finite()) {
            return input("couplings must be finite");
        }
        if !(self.drive.re.is_finite() && self.drive.im.is_finite()) {
            return input("drive must be finite");
        }
        Ok(())
    }

    pub fn alpha2(&self) -> Complex64 {
        Complex64::new(0.0, -2.0) * self.drive / self.kappa2
    }

    /// Γ = 2θ₀²/κ₂.
    pub fn gamma(&self) -> f64 {
        2.0 * self.theta0 * self.theta0 / self.kappa2
    }

    /// κ₁ + Γ.
    pub fn total_rate(&self) -> f64 {
        self.kappa1 + self.gamma()
    }

    pub fn regime(&self) -> RegimeReport {
        RegimeReport {
            theta0_over_kappa2: self.theta0.abs() / self.kappa2,
            theta_over_kappa2: self.theta.abs() / self.kappa2,
        }
    }

    /// In strict mode, fails when either ratio reaches [`REGIME_LIMIT`].
    pub fn check_regime(&self) -> Result<RegimeReport> {
        self.validate()?;
        let r = self.regime();
        if self.mode == RegimeMode::Strict {
            if r.theta0_over_kappa2 >= REGIME_LIMIT {
                return Err(Error::Regime {
                    name: "theta0/kappa2",
                    value: r.theta0_over_kappa2,
                    limit: REGIME_LIMIT,
                });
            }
            if r.theta_over_kappa2 >= REGIME_LIMIT {
                return Err(Error::Regime {
                    name: "|theta|/kappa2",
                    value: r.theta_over_kappa2,
                    limit: REGIME_LIMIT,
                });
            }
        }
        Ok(r)
    }

    /// √(ħω̃/2L), amperes per unit field amplitude.
    pub fn current_scale(&self) -> f64 {
        (self.hbar * self.omega_tilde / (2.0 * self.inductance)).sqrt()
    }

    /// Stationary current per phonon, G = −√(8ħω̃/L)·|α₂|·θ/(Γ + κ₁).
    /// Positive when θ < 0.
    pub fn stationary_gain(&self) -> f64 {
        -(8.0 * self.hbar * self.omega_tilde / self.inductance).sqrt() * self.alpha2().norm() * self.theta
            / self.total_rate()
    }

    /// Photocurrent i√(ħω̃/2L)·⟨e^{iφ}a₁† − e^{−iφ}a₁⟩ of a field amplitude,
    /// with φ = arg α₂ (φ = 0 for the real α₂ of a purely imaginary drive).
    pub fn current_from_amplitude(&self, a1: Complex64) -> f64 {
        let alpha2 = self.alpha2();
        let reference = if alpha2.norm() > 0.0 { alpha2 / alpha2.norm() } else { Complex64::new(1.0, 0.0) };
        2.0 * self.current_scale() * (reference.conj() * a1).im
    }
}

/// Closed-form mean current at time `t` for mean phonon number `n_b`,
/// starting from ⟨a₁(0)⟩ = 0:
/// −(α₂θ√(8ħω̃)/(√L(Γ + κ₁)))·n_b·(1 − e^{−(Γ+κ₁)t/2}).
pub fn mean_photocurrent(t: f64, n_b: f64, p: &ReadoutParams) -> Result<f64> {
    p.check_regime()?;
    if !(t >= 0.0) {
        return input(format!("time must be >= 0, got {t}"));
    }
    if !(n_b >= 0.0) {
        return input(format!("mean phonon number must be >= 0, got {n_b}"));
    }
    Ok(p.stationary_gain() * n_b * -(-p.total_rate() * t / 2.0).exp_m1())
}

/// Closed-form ⟨a₁(t)⟩ of the eliminated model from ⟨a₁(0)⟩ = `a1_0`.
pub fn eliminated_amplitude(t: f64, n_b: f64, a1_0: Complex64, p: &ReadoutParams) -> Complex64 {
    let r = p.total_rate();
    let decay = (-r * t / 2.0).exp();
    let stationary = eliminated_stationary_amplitude(n_b, p);
    a1_0 * decay + stationary * (1.0 - decay)
}

/// Long-time limit −2iα₂θn_b/(Γ + κ₁).
pub fn eliminated_stationary_amplitude(n_b: f64, p: &ReadoutParams) -> Complex64 {
    Complex64::new(0.0, -2.0) * p.alpha2() * p.theta * n_b / p.total_rate()
}

fn complex_options(scale: f64, rtol: f64) -> IntegratorOptions {
    IntegratorOptions {
        rtol,
        atol: (scale * 1e-15).max(1e-300),
        h0: None,
        max_steps: 20_000_000,
    }
}

/// Numerically integrates the eliminated mean equation and returns ⟨a₁⟩ at
/// each of `times`.
pub fn integrate_mean_qsde(p: &ReadoutParams, n_b: f64, a1_0: Complex64, times: &[f64]) -> Result<Vec<Complex64>> {
    p.check_regime()?;
    let r = p.total_rate();
    let force = Complex64::new(0.0, -1.0) * p.theta * p.alpha2() * n_b;
    // τ = r·t keeps the step size O(1).
    let taus: Vec<f64> = times.iter().map(|t| t * r).collect();
    let scale = a1_0.norm() + force.norm() / r;
    let rhs = |_tau: f64, y: &[f64], dy: &mut [f64]| {
        let a = Complex64::new(y[0], y[1]);
        let da = (force - 0.5 * r * a) / r;
        dy[0] = da.re;
        dy[1] = da.im;
    };
    let (ys, _) = integrate(rhs, 0.0, &[a1_0.re, a1_0.im], &taus, &complex_options(scale, 1e-12))?;
    Ok(ys.into_iter().map(|y| Complex64::new(y[0], y[1])).collect())
}

/// Integrates the coupled mean equations of both resonators without
/// eliminating resonator 2:
///
/// ```text
/// d⟨a₁⟩/dt = −i(θ₀ + θn_b)⟨a₂⟩ − κ₁/2·⟨a₁⟩
/// d⟨a₂⟩/dt = −i(θ₀ + θn_b)⟨a₁⟩ − κ₂/2·⟨a₂⟩ − iF
/// ```
///
/// b†b is conserved, so it enters as the number `n_b`.
pub fn full_two_mode_mean_dynamics(
    p: &ReadoutParams,
    n_b: f64,
    initial: (Complex64, Complex64),
    times: &[f64],
    rtol: f64,
) -> Result<Vec<(Complex64, Complex64)>> {
    p.validate()?;
    if !(n_b >= 0.0) {
        return input(format!("mean phonon number must be >= 0, got {n_b}"));
    }
    let g = p.theta0 + p.theta * n_b;
    let unit = p.kappa1 + p.kappa2;
    let taus: Vec<f64> = times.iter().map(|t| t * unit).collect();
    let i = Complex64::new(0.0, 1.0);
    let drive = p.drive;
    let (k1, k2) = (p.kappa1, p.kappa2);
    let rhs = |_tau: f64, y: &[f64], dy: &mut [f64]| {
        let a1 = Complex64::new(y[0], y[1]);
        let a2 = Complex64::new(y[2], y[3]);
        let d1 = (-i * g * a2 - 0.5 * k1 * a1) / unit;
        let d2 = (-i * g * a1 - 0.5 * k2 * a2 - i * drive) / unit;
        dy[0] = d1.re;
        dy[1] = d1.im;
        dy[2] = d2.re;
        dy[3] = d2.im;
    };
    let scale = initial.0.norm() + initial.1.norm() + p.alpha2().norm();
    let y0 = [initial.0.re, initial.0.im, initial.1.re, initial.1.im];
    let (ys, _) = integrate(rhs, 0.0, &y0, &taus, &complex_options(scale, rtol))?;
    Ok(ys
        .into_iter()
        .map(|y| (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])))
        .collect())
}

/// Stationary (⟨a₁⟩, ⟨a₂⟩) of the two-mode mean system, read off the
/// integrated trajectory once transients have decayed by e^{−40}.
pub fn full_two_mode_stationary(p: &ReadoutParams, n_b: f64, rtol: f64) -> Result<(Complex64, Complex64)> {
    let g = (p.theta0 + p.theta * n_b).abs();
    // Slowest decay rate of the homogeneous system is bounded below by the
    // smaller of κ₁/2 and the hybridized rate; 80 time constants of κ₁/2 plus
    // the coupling-limited rate cover both.
    let slow = 0.5 * p.kappa1.min(p.kappa2).min(4.0 * p.kappa1 * p.kappa2 / (p.kappa1 + p.kappa2 + 4.0 * g * g / p.kappa2.max(p.kappa1)));
    let t_end = 80.0 / slow;
    let ys = full_two_mode_mean_dynamics(
        p,
        n_b,
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        &[0.95 * t_end, t_end],
        rtol,
    )?;
    let (a, b) = (ys[0], ys[1]);
    let drift = (a.0 - b.0).norm() / b.0.norm().max(f64::MIN_POSITIVE);
    if drift > 1e-9 {
        return Err(Error::Integration {
            t: t_end,
            reason: format!("two-mode system not stationary (relative drift {drift:.3e})"),
        });
    }
    Ok(b)
}

/// Outcome of comparing the full two-mode model with the eliminated one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliminationCheck {
    /// Phonon-dependent stationary ⟨a₁⟩ of the full model:
    /// ⟨a₁⟩(n_b) − ⟨a₁⟩(0).
    pub full: Complex64,
    pub eliminated: Complex64,
    pub relative_error: f64,
}

/// Compares the phonon-dependent part of the stationary ⟨a₁⟩.
///
/// The full model also carries a phonon-independent offset −iθ₀⟨a₂⟩ that the
/// eliminated equation omits; it is removed by subtracting the n_b = 0 run.
pub fn elimination_check(p: &ReadoutParams, n_b: f64, rtol: f64) -> Result<EliminationCheck> {
    if !(n_b > 0.0) {
        return input("elimination check needs n_b > 0");
    }
    let with = full_two_mode_stationary(p, n_b, rtol)?.0;
    let without = full_two_mode_stationary(p, 0.0, rtol)?.0;
    let full = with - without;
    let eliminated = eliminated_stationary_amplitude(n_b, p);
    Ok(EliminationCheck {
        full,
        eliminated,
        relative_error: (full - eliminated).norm() / eliminated.norm(),
    })
}

/// Probabilities over Fock states n = 0..len.
#[derive(Debug, Clone, PartialEq)]
pub struct PhononDistribution {
    probs: Vec<f64>,
}

impl PhononDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return input("empty phonon distribution");
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return input("phonon probabilities must be finite and nonnegative");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return input(format!("phonon probabilities sum to {total}, not 1"));
        }
        Ok(Self { probs })
    }

    pub fn fock(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        Self { probs }
    }

    /// Poisson distribution (thermal-free coherent beam), truncated where the
    /// tail drops below 10⁻¹⁶ and renormalized.
    pub fn poisson(mean: f64) -> Result<Self> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return input(format!("Poisson mean must be >= 0, got {mean}"));
        }
        let len = crate::poisson::required_cutoff(mean, 1e-16);
        let mut probs = crate::poisson::weights(mean, len);
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(Self { probs })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs.iter().enumerate().map(|(n, p)| (n as f64 - m).powi(2) * p).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentStatistics {
    pub mean: f64,
    /// Signal part G²·Var(n); vacuum and added noise are not included.
    pub signal_variance: f64,
    pub gain: f64,
}

/// Stationary mean current and signal variance for a phonon distribution.
pub fn stationary_current_statistics(dist: &PhononDistribution, p: &ReadoutParams) -> Result<CurrentStatistics> {
    p.check_regime()?;
    let gain = p.stationary_gain();
    let probs = dist.probabilities();
    let mean: f64 = probs.iter().enumerate().map(|(n, w)| w * gain * n as f64).sum();
    let signal_variance: f64 = probs
        .iter()
        .enumerate()
        .map(|(n, w)| w * (gain * n as f64 - mean).powi(2))
        .sum();
    Ok(CurrentStatistics {
        mean,
        signal_variance,
        gain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::params::effective_params;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn desk_readout() -> ReadoutParams {
        let p = PhysicalCircuitParams::default();
        let eff = effective_params(&p).unwrap();
        let kappa2 = 100.0 * eff.theta0;
        let drive = c(0.0, 0.5 * kappa2 * 1e3);
        ReadoutParams::from_device(&eff, &p, drive, 2.0 * eff.theta0 * eff.theta0 / kappa2, kappa2, 1e-9).unwrap()
    }

    #[test]
    fn alpha2_identities() {
        assert_eq!(steady_alpha2(c(0.0, 0.0), 2.0).unwrap(), c(0.0, 0.0));
        let k2 = 3.7;
        let a = steady_alpha2(c(0.0, k2 / 2.0), k2).unwrap();
        assert!((a - c(1.0, 0.0)).norm() < 1e-15);
        let a1 = steady_alpha2(c(0.3, 0.4), 1.0).unwrap().norm();
        let a2 = steady_alpha2(c(0.3, 0.4), 2.0).unwrap().norm();
        assert!((a1 / a2 - 2.0).abs() < 1e-15);
        assert!(steady_alpha2(c(1.0, 0.0), 0.0).is_err());
        assert!(steady_alpha2(c(1.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn derived_rates() {
        let p = desk_readout();
        assert!((p.gamma() - 2.0 * p.theta0 * p.theta0 / p.kappa2).abs() <= 1e-15 * p.gamma());
        assert!(p.alpha2().im.abs() < 1e-12 * p.alpha2().re);
        assert!(p.alpha2().re > 0.0);
    }

    #[test]
    fn current_edge_cases() {
        let p = desk_readout();
        assert_eq!(mean_photocurrent(0.0, 3.0, &p).unwrap(), 0.0);
        for t in [0.0, 1e-9, 1e-6] {
            assert_eq!(mean_photocurrent(t, 0.0, &p).unwrap(), 0.0);
        }
        assert!(mean_photocurrent(-1.0, 1.0, &p).is_err());
        assert!(mean_photocurrent(1.0, -1.0, &p).is_err());
    }

    #[test]
    fn current_is_positive_for_negative_theta() {
        let p = desk_readout();
        assert!(p.theta < 0.0);
        let t = 1.0 / p.total_rate();
        assert!(mean_photocurrent(t, 2.0, &p).unwrap() > 0.0);
        assert!(p.stationary_gain() > 0.0);
    }

    #[test]
    fn closed_form_matches_operator_definition() {
        // i√(ħω̃/2L)⟨a₁† − a₁⟩ evaluated on the closed-form ⟨a₁(t)⟩.
        let p = desk_readout();
        let t = 0.7 / p.total_rate();
        let a = eliminated_amplitude(t, 2.0, c(0.0, 0.0), &p);
        let direct = (c(0.0, 1.0) * (a.conj() - a)).re * p.current_scale();
        let i = mean_photocurrent(t, 2.0, &p).unwrap();
        assert!((direct - i).abs() < 1e-13 * i.abs());
    }

    #[test]
    fn strict_mode_rejects_large_ratio() {
        let mut p = desk_readout();
        p.mode = RegimeMode::Strict;
        assert!(mean_photocurrent(1e-9, 1.0, &p).is_ok());
        p.kappa2 = 5.0 * p.theta0;
        match mean_photocurrent(1e-9, 1.0, &p) {
            Err(Error::Regime { name, value, .. }) => {
                assert_eq!(name, "theta0/kappa2");
                assert!((value - 0.2).abs() < 1e-12);
            }
            other => panic!("expected regime error, got {other:?}"),
        }
        p.mode = RegimeMode::Permissive;
        assert!(mean_photocurrent(1e-9, 1.0, &p).is_ok());
        assert!(!p.regime().satisfied());
    }

    #[test]
    fn homogeneous_decay() {
        let p = desk_readout();
        let r = p.total_rate();
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 0.5 / r).collect();
        let a = integrate_mean_qsde(&p, 0.0, c(1.0, 0.0), &times).unwrap();
        for (t, v) in times.iter().zip(&a) {
            let exact = (-r * t / 2.0).exp();
            assert!((v - c(exact, 0.0)).norm() < 1e-10 * exact, "t={t}");
        }
    }

    #[test]
    fn decoupled_modes_relax_to_alpha2() {
        let mut p = desk_readout();
        p.theta0 = 0.0;
        p.theta = 0.0;
        p.kappa1 = p.kappa2;
        let (a1, a2) = full_two_mode_stationary(&p, 3.0, 1e-10).unwrap();
        assert_eq!(a1, c(0.0, 0.0));
        assert!((a2 - p.alpha2()).norm() < 1e-9 * p.alpha2().norm());
    }

    #[test]
    fn statistics_of_simple_distributions() {
        let p = desk_readout();
        let g = p.stationary_gain();
        let s = stationary_current_statistics(&PhononDistribution::fock(3), &p).unwrap();
        assert!((s.mean - 3.0 * g).abs() < 1e-14 * g);
        assert_eq!(s.signal_variance, 0.0);

        let pois = PhononDistribution::poisson(2.5).unwrap();
        let s = stationary_current_statistics(&pois, &p).unwrap();
        assert!((s.signal_variance - g * g * 2.5).abs() < 1e-12 * g * g);

        let two = PhononDistribution::new(vec![0.5, 0.0, 0.5]).unwrap();
        let s = stationary_current_statistics(&two, &p).unwrap();
        assert!((s.mean - g).abs() < 1e-14 * g);
        assert!((s.signal_variance - g * g).abs() < 1e-14 * g * g);

        assert!(PhononDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(PhononDistribution::new(vec![1.5, -0.5]).is_err());
    }
}
