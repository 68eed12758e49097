//! Classical Kirchhoff dynamics of the two resonators with a moving beam.
//!
//! Integrates
//!
//! ```text
//! dQ₁/dt = P₁/L₁
//! dP₁/dt = −Q₁/C̃₁(t) − k(t)·Q₂ − (d − x)/(2d)·V(t)
//! dQ₂/dt = P₂/L₂
//! dP₂/dt = −Q₂/C̃₂(t) − k(t)·Q₁ + (d + x)/(2d)·V(t)
//! ```
//!
//! with k(t) = (d² − x²(t))/(2dε₀A) and 1/C̃ᵢ(t) = 1/Cᵢ + k(t), using the exact
//! time-dependent coefficients. The charge constant K of the current balance is
//! zero. V(t) is exogenous and defaults to zero.

use std::fmt;
use std::sync::Arc;

use crate::circuit::params::{effective_params, PhysicalCircuitParams};
use crate::error::{input, Result};
use crate::format::CsvTable;
use crate::circuit::spectrum::estimate_dominant_frequency;
use crate::ode::{integrate, linspace, IntegratorOptions};

/// A scalar function of time used for x(t) and V(t).
#[derive(Clone)]
pub enum TimeFunction {
    Zero,
    /// `amplitude · cos(rate·t + phase)`
    Cosine { amplitude: f64, rate: f64, phase: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "Zero"),
            Self::Cosine { amplitude, rate, phase } => f
                .debug_struct("Cosine")
                .field("amplitude", amplitude)
                .field("rate", rate)
                .field("phase", phase)
                .finish(),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Default for TimeFunction {
    fn default() -> Self {
        Self::Zero
    }
}

impl TimeFunction {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Cosine { amplitude, rate, phase } => amplitude * (rate * t + phase).cos(),
            Self::Custom(f) => f(t),
        }
    }

    /// Upper estimate of max |f| on `[t0, t1]`; exact for the closed forms,
    /// sampled on `probe` points otherwise.
    fn max_abs(&self, t0: f64, t1: f64, probe: usize) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Cosine { amplitude, .. } => amplitude.abs(),
            Self::Custom(f) => linspace(t0, t1, probe.max(2))
                .into_iter()
                .map(|t| f(t).abs())
                .fold(0.0, f64::max),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CircuitState {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

#[derive(Debug, Clone)]
pub struct ClassicalCircuitConfig {
    pub params: PhysicalCircuitParams,
    /// Beam displacement x(t) (m).
    pub x_drive: TimeFunction,
    /// Voltage V_CT(t) across the beam capacitor (V).
    pub v_ct: TimeFunction,
    pub initial: CircuitState,
    /// Simulated span `[0, t_end]` (s).
    pub t_end: f64,
    /// Number of uniformly spaced output samples, including both ends.
    pub samples: usize,
    pub rtol: f64,
    pub max_steps: usize,
}

impl ClassicalCircuitConfig {
    pub fn new(params: PhysicalCircuitParams, initial: CircuitState, t_end: f64, samples: usize) -> Self {
        Self {
            params,
            x_drive: TimeFunction::Zero,
            v_ct: TimeFunction::Zero,
            initial,
            t_end,
            samples,
            rtol: 1e-10,
            max_steps: 50_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return input("t_end must be positive");
        }
        if self.samples < 2 {
            return input("need at least two output samples");
        }
        if !(self.rtol > 0.0) {
            return input("rtol must be positive");
        }
        let xmax = self.x_drive.max_abs(0.0, self.t_end, 8 * self.samples);
        if !(xmax < self.params.gap) {
            return input(format!(
                "short circuit: max |x(t)| = {xmax:.3e} m is not below the gap d = {:.3e} m",
                self.params.gap
            ));
        }
        Ok(())
    }
}

/// Uniformly sampled classical trajectory, SI units.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CircuitState>,
}

impl Trajectory {
    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn q1(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.q1).collect()
    }

    pub fn q2(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.q2).collect()
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "Q1", "P1", "Q2", "P2"]);
        for (time, s) in self.times.iter().zip(&self.states) {
            t.push(vec![*time, s.q1, s.p1, s.q2, s.p2]);
        }
        t
    }
}

/// k = (d² − x²)/(2dε₀A), the instantaneous charge–charge coupling (1/F).
pub fn coupling_coefficient(p: &PhysicalCircuitParams, x: f64) -> f64 {
    (p.gap * p.gap - x * x) / (2.0 * p.gap * p.eps0 * p.area)
}

/// Circuit Hamiltonian
/// ½Σ(Pᵢ²/Lᵢ + Qᵢ²/C̃ᵢ) + k·Q₁Q₂ − Σ((−1)ⁱd + x)/(2d)·V·Qᵢ at displacement `x`
/// and voltage `v`.
pub fn circuit_energy(p: &PhysicalCircuitParams, s: &CircuitState, x: f64, v: f64) -> f64 {
    let k = coupling_coefficient(p, x);
    let inv_ct1 = 1.0 / p.c1 + k;
    let inv_ct2 = 1.0 / p.c2 + k;
    0.5 * (s.p1 * s.p1 / p.l1 + s.q1 * s.q1 * inv_ct1 + s.p2 * s.p2 / p.l2 + s.q2 * s.q2 * inv_ct2)
        + k * s.q1 * s.q2
        - ((-p.gap + x) / (2.0 * p.gap)) * v * s.q1
        - ((p.gap + x) / (2.0 * p.gap)) * v * s.q2
}

/// Normal-mode angular frequencies (lower, upper) of the frozen-coefficient
/// system with x² replaced by `x_sq`.
pub fn normal_mode_frequencies(p: &PhysicalCircuitParams, x_sq: f64) -> (f64, f64) {
    let k = (p.gap * p.gap - x_sq) / (2.0 * p.gap * p.eps0 * p.area);
    let a = (1.0 / p.c1 + k) / p.l1;
    let d = (1.0 / p.c2 + k) / p.l2;
    let b = k / p.l1;
    let c = k / p.l2;
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (((tr - disc) / 2.0).sqrt(), ((tr + disc) / 2.0).sqrt())
}

/// Integrates the four coupled circuit equations and samples them uniformly.
pub fn simulate_classical_circuit(cfg: &ClassicalCircuitConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let p = cfg.params;
    let eff = effective_params(&p)?;
    // Internal units: τ = ω_s t, qᵢ = Qᵢ/Q_s, pᵢ = Pᵢ/(Lᵢ ω_s Q_s).
    let ws = eff.omega_tilde1;
    let s0 = cfg.initial;
    let mut qs = [s0.q1.abs(), s0.q2.abs(), (s0.p1 / (p.l1 * ws)).abs(), (s0.p2 / (p.l2 * ws)).abs()]
        .into_iter()
        .fold(0.0, f64::max);
    if qs == 0.0 {
        let vmax = cfg.v_ct.max_abs(0.0, cfg.t_end, 8 * cfg.samples);
        qs = if vmax > 0.0 { eff.ceq * vmax } else { eff.ceq };
    }
    let y0 = [s0.q1 / qs, s0.p1 / (p.l1 * ws * qs), s0.q2 / qs, s0.p2 / (p.l2 * ws * qs)];

    let inv_l1w2 = 1.0 / (p.l1 * ws * ws);
    let inv_l2w2 = 1.0 / (p.l2 * ws * ws);
    let x_drive = &cfg.x_drive;
    let v_ct = &cfg.v_ct;
    let v_zero = v_ct.is_zero();
    let rhs = |tau: f64, y: &[f64], dy: &mut [f64]| {
        let t = tau / ws;
        let x = x_drive.eval(t);
        let k = coupling_coefficient(&p, x);
        let inv_ct1 = 1.0 / p.c1 + k;
        let inv_ct2 = 1.0 / p.c2 + k;
        dy[0] = y[1];
        dy[1] = -(inv_ct1 * y[0] + k * y[2]) * inv_l1w2;
        dy[2] = y[3];
        dy[3] = -(inv_ct2 * y[2] + k * y[0]) * inv_l2w2;
        if !v_zero {
            let v = v_ct.eval(t) / qs;
            dy[1] -= (p.gap - x) / (2.0 * p.gap) * v * inv_l1w2;
            dy[3] += (p.gap + x) / (2.0 * p.gap) * v * inv_l2w2;
        }
    };

    let times = linspace(0.0, cfg.t_end, cfg.samples);
    let taus: Vec<f64> = times.iter().map(|t| t * ws).collect();
    let opts = IntegratorOptions {
        rtol: cfg.rtol,
        atol: cfg.rtol * 1e-3,
        h0: None,
        max_steps: cfg.max_steps,
    };
    let (ys, _) = integrate(rhs, 0.0, &y0, &taus, &opts)?;
    let states = ys
        .iter()
        .map(|y| CircuitState {
            q1: y[0] * qs,
            p1: y[1] * p.l1 * ws * qs,
            q2: y[2] * qs,
            p2: y[3] * p.l2 * ws * qs,
        })
        .collect();
    Ok(Trajectory { times, states })
}

/// Largest relative deviation of the circuit energy from its initial value
/// over `periods` periods of the lower normal mode, with x ≡ 0 and V ≡ 0.
pub fn energy_drift(p: &PhysicalCircuitParams, initial: CircuitState, periods: f64, rtol: f64) -> Result<f64> {
    let (w_lo, _) = normal_mode_frequencies(p, 0.0);
    let period = 2.0 * std::f64::consts::PI / w_lo;
    let mut cfg = ClassicalCircuitConfig::new(*p, initial, periods * period, 11);
    cfg.rtol = rtol;
    let tr = simulate_classical_circuit(&cfg)?;
    let e0 = circuit_energy(p, &tr.states[0], 0.0, 0.0);
    if e0 == 0.0 {
        return input("energy drift needs a nonzero initial energy");
    }
    Ok(tr
        .states
        .iter()
        .map(|s| (circuit_energy(p, s, 0.0, 0.0) - e0).abs() / e0)
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingReport {
    /// Dominant angular frequency of Q₁ (rad/s).
    pub peak: f64,
    /// ω̃₁ from the effective parameters (rad/s).
    pub omega_tilde: f64,
    /// |peak − ω̃|/ω̃.
    pub relative_error: f64,
    /// Frozen normal modes with x² replaced by its average x₀²/2.
    pub averaged_modes: (f64, f64),
    /// Relative distance from the peak to the nearer averaged mode.
    pub mode_error: f64,
}

/// Drives the beam with x(t) = x₀cos(νt) from the charges in `initial` and
/// compares the dominant Q₁ frequency with ω̃.
///
/// Runs for `periods` periods of ω̃ sampled `samples_per_period` times each.
/// With identical resonators the lower mode is 1/√(LC) whatever x does, so
/// only the upper (Q₁ = Q₂) mode feels the averaged beam.
pub fn averaging_check(
    p: &PhysicalCircuitParams,
    initial: CircuitState,
    x0: f64,
    nu: f64,
    periods: f64,
    samples_per_period: usize,
) -> Result<AveragingReport> {
    let eff = effective_params(p)?;
    let omega_tilde = eff.omega_tilde1;
    let period = 2.0 * std::f64::consts::PI / omega_tilde;
    let samples = (periods * samples_per_period as f64).ceil() as usize + 1;
    let mut cfg = ClassicalCircuitConfig::new(*p, initial, periods * period, samples);
    cfg.x_drive = TimeFunction::Cosine {
        amplitude: x0,
        rate: nu,
        phase: 0.0,
    };
    let tr = simulate_classical_circuit(&cfg)?;
    let peak = estimate_dominant_frequency(&tr.q1(), tr.dt())?;
    let averaged_modes = normal_mode_frequencies(p, x0 * x0 / 2.0);
    let mode_error = ((peak - averaged_modes.0).abs() / averaged_modes.0)
        .min((peak - averaged_modes.1).abs() / averaged_modes.1);
    Ok(AveragingReport {
        peak,
        omega_tilde,
        relative_error: (peak - omega_tilde).abs() / omega_tilde,
        averaged_modes,
        mode_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weak_coupling_params() -> PhysicalCircuitParams {
        // ω_eq²/ω² = 0.05.
        PhysicalCircuitParams::weak_coupling(20.0)
    }

    #[test]
    fn zero_data_gives_zero_trajectory() {
        let p = weak_coupling_params();
        let cfg = ClassicalCircuitConfig::new(p, CircuitState::default(), 1e-9, 64);
        let tr = simulate_classical_circuit(&cfg).unwrap();
        assert!(tr.states.iter().all(|s| *s == CircuitState::default()));
    }

    #[test]
    fn symmetric_start_follows_upper_normal_mode() {
        let p = weak_coupling_params();
        let (_, w_up) = normal_mode_frequencies(&p, 0.0);
        let q0 = 1e-18;
        let period = 2.0 * std::f64::consts::PI / w_up;
        let cfg = ClassicalCircuitConfig::new(
            p,
            CircuitState {
                q1: q0,
                q2: q0,
                ..Default::default()
            },
            20.0 * period,
            401,
        );
        let tr = simulate_classical_circuit(&cfg).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            let exact = q0 * (w_up * t).cos();
            assert!((s.q1 - exact).abs() < 1e-7 * q0, "t={t}");
            assert!((s.q1 - s.q2).abs() < 1e-12 * q0);
        }
    }

    #[test]
    fn short_circuit_guard() {
        let p = weak_coupling_params();
        let mut cfg = ClassicalCircuitConfig::new(p, CircuitState::default(), 1e-9, 64);
        cfg.x_drive = TimeFunction::Cosine {
            amplitude: 1.5 * p.gap,
            rate: 1e11,
            phase: 0.0,
        };
        assert!(simulate_classical_circuit(&cfg).is_err());
        cfg.x_drive = TimeFunction::custom(move |t| if t > 5e-10 { 2.0 * 1e-8 } else { 0.0 });
        assert!(simulate_classical_circuit(&cfg).is_err());
    }

    #[test]
    fn energy_is_conserved_without_modulation() {
        let p = weak_coupling_params();
        let (w_lo, _) = normal_mode_frequencies(&p, 0.0);
        let init = CircuitState {
            q1: 1e-18,
            p1: 0.0,
            q2: -3e-19,
            p2: 2e-18 * p.l2 * w_lo,
        };
        let drift = energy_drift(&p, init, 1000.0, 1e-12).unwrap();
        assert!(drift < 1e-8, "relative drift {drift:.3e}");
        assert!(energy_drift(&p, CircuitState::default(), 10.0, 1e-10).is_err());
    }

    #[test]
    fn mirror_symmetry_swaps_resonators() {
        // x → −x with 1 ↔ 2 maps the equations onto themselves when the
        // resonators are identical; the V terms change sign under the swap.
        let p = weak_coupling_params();
        let x = TimeFunction::Cosine {
            amplitude: 0.1 * p.gap,
            rate: 3e11,
            phase: 0.3,
        };
        let neg_x = TimeFunction::Cosine {
            amplitude: -0.1 * p.gap,
            rate: 3e11,
            phase: 0.3,
        };
        let v = TimeFunction::Cosine {
            amplitude: 1e-3,
            rate: 2e10,
            phase: 0.0,
        };
        let neg_v = TimeFunction::Cosine {
            amplitude: -1e-3,
            rate: 2e10,
            phase: 0.0,
        };
        let init = CircuitState {
            q1: 2e-19,
            p1: 0.0,
            q2: -1e-19,
            p2: 0.0,
        };
        let swapped = CircuitState {
            q1: init.q2,
            p1: init.p2,
            q2: init.q1,
            p2: init.p1,
        };
        let mut a = ClassicalCircuitConfig::new(p, init, 2e-9, 101);
        a.x_drive = x;
        a.v_ct = v;
        let mut b = ClassicalCircuitConfig::new(p, swapped, 2e-9, 101);
        b.x_drive = neg_x;
        b.v_ct = neg_v;
        let ta = simulate_classical_circuit(&a).unwrap();
        let tb = simulate_classical_circuit(&b).unwrap();
        let scale = ta.q1().iter().chain(ta.q2().iter()).map(|v| v.abs()).fold(0.0, f64::max);
        for (sa, sb) in ta.states.iter().zip(&tb.states) {
            assert!((sa.q1 - sb.q2).abs() < 1e-8 * scale);
            assert!((sa.q2 - sb.q1).abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn fast_modulation_averages_out() {
        let p = weak_coupling_params();
        let w = effective_params(&p).unwrap().omega_tilde1;
        // x₀²/(2d²) = 10⁻⁶, ν = 20ω̃.
        let x0 = p.gap * 2e-6f64.sqrt();
        let one = CircuitState {
            q1: 1e-18,
            ..Default::default()
        };
        let r = averaging_check(&p, one, x0, 20.0 * w, 400.0, 16).unwrap();
        assert!(r.relative_error < 0.02, "{r:?}");
        assert!(r.mode_error < 1e-4, "{r:?}");
    }

    #[test]
    fn large_modulation_follows_averaged_modes() {
        // x₀²/(2d²) = 0.2 moves the frozen modes well away from the x = 0 ones.
        let p = weak_coupling_params();
        let w = effective_params(&p).unwrap().omega_tilde1;
        let x0 = p.gap * 0.4f64.sqrt();
        let both = CircuitState {
            q1: 1e-18,
            q2: 1e-18,
            ..Default::default()
        };
        let r = averaging_check(&p, both, x0, 20.0 * w, 400.0, 16).unwrap();
        let (_, hi0) = normal_mode_frequencies(&p, 0.0);
        let shift = (r.averaged_modes.1 - hi0).abs() / hi0;
        assert!(shift > 1e-3);
        assert!((r.peak - r.averaged_modes.1).abs() / r.averaged_modes.1 < 0.1 * shift, "{r:?}");
    }

    #[test]
    fn csv_header() {
        let tr = Trajectory {
            times: vec![0.0],
            states: vec![CircuitState::default()],
        };
        assert_eq!(tr.to_csv().render().lines().next(), Some("t,Q1,P1,Q2,P2"));
    }
}
