//! Physical circuit parameters and the effective constants derived from them.
//!
//! Everything here is SI. The effective interaction between the two resonators
//! is `ħ(θ₀ + θ b†b)(a₁†a₂ + a₁a₂†)`; [`EffectiveParams`] carries θ₀ and θ along
//! with the renormalized capacitances and frequencies that feed them.

use crate::error::{input, Error, Result};

/// Vacuum permittivity, CODATA 2018 (F/m).
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant, CODATA 2018 (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Lumped description of the two resonators and the mechanical element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalCircuitParams {
    /// Inductance of resonator 1 (H).
    pub l1: f64,
    /// Inductance of resonator 2 (H).
    pub l2: f64,
    /// Capacitance of resonator 1 (F).
    pub c1: f64,
    /// Capacitance of resonator 2 (F).
    pub c2: f64,
    /// Equilibrium gap between each resonator and the beam (m).
    pub gap: f64,
    /// Lateral area of the beam (m²).
    pub area: f64,
    pub eps0: f64,
    /// Beam mass (kg).
    pub mass: f64,
    /// Beam angular frequency (rad/s).
    pub nu: f64,
    pub hbar: f64,
}

impl Default for PhysicalCircuitParams {
    /// Desk-scale device: 10 nm gap, 1 µm² plate, resonators at 2π·6 GHz
    /// bare frequency with C = C_eq/20, and a beam whose ħ/(mνd²) is exactly
    /// 10⁻⁶.
    fn default() -> Self {
        let gap = 1e-8;
        let nu = 1e10;
        let area = 1e-12;
        let c = EPS0 * area / gap / 20.0;
        let omega = 2.0 * std::f64::consts::PI * 6e9;
        let l = 1.0 / (omega * omega * c);
        Self {
            l1: l,
            l2: l,
            c1: c,
            c2: c,
            gap,
            area,
            eps0: EPS0,
            mass: HBAR / (1e-6 * gap * gap * nu),
            nu,
            hbar: HBAR,
        }
    }
}

impl PhysicalCircuitParams {
    /// Default device with both resonator capacitances set to C_eq/`ratio`
    /// and the inductances retuned to keep the bare frequency 2π·6 GHz.
    /// Large ratios make the beam capacitor a weak perturbation.
    pub fn weak_coupling(ratio: f64) -> Self {
        let base = Self::default();
        let c = equilibrium_capacitance(&base) / ratio;
        let omega = 2.0 * std::f64::consts::PI * 6e9;
        let l = 1.0 / (omega * omega * c);
        Self {
            c1: c,
            c2: c,
            l1: l,
            l2: l,
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("l1", self.l1),
            ("l2", self.l2),
            ("c1", self.c1),
            ("c2", self.c2),
            ("gap", self.gap),
            ("area", self.area),
            ("eps0", self.eps0),
            ("mass", self.mass),
            ("nu", self.nu),
            ("hbar", self.hbar),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return input(format!("{name} must be finite and strictly positive, got {v}"));
            }
        }
        Ok(())
    }

    /// ħ/(d²·m·ν), the ratio |θ/θ₀|.
    pub fn zero_point_ratio(&self) -> f64 {
        self.hbar / (self.gap * self.gap * self.mass * self.nu)
    }
}

/// C_eq = ε₀A/d, the capacitance between either resonator and the beam at rest.
pub fn equilibrium_capacitance(p: &PhysicalCircuitParams) -> f64 {
    p.eps0 * p.area / p.gap
}

/// Root-mean-square displacement sqrt(ħ/(mν)·(n_b + ½)) for mean phonon number `n_b`.
pub fn x_rms(p: &PhysicalCircuitParams, n_b: f64) -> Result<f64> {
    if !(n_b >= 0.0 && n_b.is_finite()) {
        return input(format!("mean phonon number must be >= 0, got {n_b}"));
    }
    Ok((p.hbar / (p.mass * p.nu) * (n_b + 0.5)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveOptions {
    /// Mean phonon number used for x_rms.
    pub mean_phonon_number: f64,
    /// Keep the (1 − x²_rms/d²) factor in the renormalized capacitances.
    /// Off by default: the maximal shift 1/(2C_eq) is used.
    pub zero_point_shift: bool,
}

impl Default for EffectiveOptions {
    fn default() -> Self {
        Self {
            mean_phonon_number: 0.0,
            zero_point_shift: false,
        }
    }
}

/// Derived constants of the effective two-resonator Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub ceq: f64,
    pub ctilde1: f64,
    pub ctilde2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega_eq1: f64,
    pub omega_eq2: f64,
    pub omega_tilde1: f64,
    pub omega_tilde2: f64,
    /// Phonon-independent beam-splitter rate (rad/s).
    pub theta0: f64,
    /// Phonon-conditioned beam-splitter rate (rad/s), negative.
    pub theta: f64,
    pub x_rms_sq_over_d_sq: f64,
    pub mean_phonon_number: f64,
    pub zero_point_shift: bool,
}

/// Derives the effective constants with default options (n_b = 0, maximal shift).
pub fn effective_params(p: &PhysicalCircuitParams) -> Result<EffectiveParams> {
    effective_params_with(p, &EffectiveOptions::default())
}

pub fn effective_params_with(p: &PhysicalCircuitParams, opts: &EffectiveOptions) -> Result<EffectiveParams> {
    p.validate()?;
    let ceq = equilibrium_capacitance(p);
    let xr = x_rms(p, opts.mean_phonon_number)?;
    let x_rms_sq_over_d_sq = xr * xr / (p.gap * p.gap);
    let shift = if opts.zero_point_shift {
        if x_rms_sq_over_d_sq >= 1.0 {
            return input(format!("x_rms²/d² = {x_rms_sq_over_d_sq:.3e} >= 1: beam would touch a resonator"));
        }
        (1.0 - x_rms_sq_over_d_sq) / (2.0 * ceq)
    } else {
        1.0 / (2.0 * ceq)
    };
    let ctilde1 = 1.0 / (1.0 / p.c1 + shift);
    let ctilde2 = 1.0 / (1.0 / p.c2 + shift);
    let omega1 = 1.0 / (p.l1 * p.c1).sqrt();
    let omega2 = 1.0 / (p.l2 * p.c2).sqrt();
    let omega_eq1 = 1.0 / (ceq * p.l1).sqrt();
    let omega_eq2 = 1.0 / (ceq * p.l2).sqrt();
    let omega_tilde1 = 1.0 / (p.l1 * ctilde1).sqrt();
    let omega_tilde2 = 1.0 / (p.l2 * ctilde2).sqrt();
    let theta0 = omega_tilde1 * ctilde1 / (4.0 * ceq);
    let theta = -p.zero_point_ratio() * theta0;
    Ok(EffectiveParams {
        ceq,
        ctilde1,
        ctilde2,
        omega1,
        omega2,
        omega_eq1,
        omega_eq2,
        omega_tilde1,
        omega_tilde2,
        theta0,
        theta,
        x_rms_sq_over_d_sq,
        mean_phonon_number: opts.mean_phonon_number,
        zero_point_shift: opts.zero_point_shift,
    })
}

impl EffectiveParams {
    /// The common resonator frequency, provided ω̃₁ and ω̃₂ agree within
    /// `rel_tol`. The rotating-wave reduction to the beam-splitter coupling
    /// needs the resonators on resonance.
    pub fn resonant_frequency(&self, rel_tol: f64) -> Result<f64> {
        let mismatch = (self.omega_tilde1 - self.omega_tilde2).abs() / self.omega_tilde1;
        if mismatch > rel_tol {
            return Err(Error::Input(format!(
                "resonators detuned: |ω̃₁ − ω̃₂|/ω̃₁ = {mismatch:.3e} exceeds {rel_tol:.3e}"
            )));
        }
        Ok(0.5 * (self.omega_tilde1 + self.omega_tilde2))
    }

    pub fn theta_ratio(&self) -> f64 {
        self.theta / self.theta0
    }

    /// Couplings expressed in units of `reference_rate` (ħ = 1).
    pub fn scaled(&self, reference_rate: f64) -> ScaledCouplings {
        ScaledCouplings {
            theta0: self.theta0 / reference_rate,
            theta: self.theta / reference_rate,
            reference_rate,
        }
    }
}

/// Dimensionless couplings plus the rate that restores SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCouplings {
    pub theta0: f64,
    pub theta: f64,
    /// rad/s per unit of dimensionless rate.
    pub reference_rate: f64,
}
