//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Lengths in m, areas in m²,
//! capacitances in F, inductances in H, masses in kg. Every angular frequency
//! key ends in `_rad_s` because "6 GHz" alone does not say whether it is f or ω.
//! Complex amplitudes are written `a+bi`, `a-bi`, `bi` or `a`.
//! Unknown keys are rejected.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::circuit::{EffectiveOptions, PhysicalCircuitParams};
use crate::entanglement::CoherentTriple;
use crate::error::{Error, Result};

/// Pass/fail limits used by `verify`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub current_ratio: f64,
    pub current_ode: f64,
    pub elimination: f64,
    /// Minimum fitted convergence order of the elimination error.
    pub elimination_order: f64,
    pub entropy_symmetry: f64,
    pub recurrence: f64,
    pub tail: f64,
    pub oracle: f64,
    pub cat: f64,
    pub separability: f64,
    pub classical: f64,
    pub energy_drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            current_ratio: 1e-12,
            current_ode: 1e-8,
            elimination: 1e-2,
            elimination_order: 1.9,
            entropy_symmetry: 1e-12,
            recurrence: 1e-10,
            tail: 1e-12,
            oracle: 1e-6,
            cat: 1e-10,
            separability: 1e-8,
            classical: 2e-2,
            energy_drift: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutSettings {
    /// Defaults to 100·θ₀.
    pub kappa2: Option<f64>,
    /// Defaults to Γ.
    pub kappa1: Option<f64>,
    /// Defaults to the drive giving α₂ = 10.
    pub drive: Option<Complex64>,
    pub points: usize,
    /// End of the normalized time axis (κ₁ + Γ)t/2.
    pub span: f64,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySettings {
    pub triple: CoherentTriple,
    pub terms: usize,
    pub theta_t_points: usize,
    pub alpha_max: f64,
    pub alpha_points: usize,
    pub oracle_nems_dim: usize,
    pub oracle_tlr_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSettings {
    /// Beam amplitude x₀; defaults to x₀²/(2d²) = 10⁻⁶.
    pub x0: Option<f64>,
    /// Beam drive rate; defaults to 20·ω̃.
    pub nu: Option<f64>,
    pub periods: f64,
    pub samples_per_period: usize,
    pub energy_periods: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub device: PhysicalCircuitParams,
    pub effective: EffectiveOptions,
    pub resonance_tol: f64,
    pub readout: ReadoutSettings,
    pub entropy: EntropySettings,
    pub classical: ClassicalSettings,
    pub tolerances: Tolerances,
    /// Relative change of θ applied to the analytic side of the oracle check.
    pub verify_theta_perturbation: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let two = Complex64::new(2.0, 0.0);
        Self {
            device: PhysicalCircuitParams::default(),
            effective: EffectiveOptions::default(),
            resonance_tol: 1e-9,
            readout: ReadoutSettings {
                kappa2: None,
                kappa1: None,
                drive: None,
                points: 200,
                span: 10.0,
                strict: false,
            },
            entropy: EntropySettings {
                triple: CoherentTriple {
                    alpha: two,
                    beta: two,
                    gamma: two,
                },
                terms: 30,
                theta_t_points: 201,
                alpha_max: 3.0,
                alpha_points: 31,
                oracle_nems_dim: 30,
                oracle_tlr_dim: 30,
            },
            classical: ClassicalSettings {
                x0: None,
                nu: None,
                periods: 400.0,
                samples_per_period: 16,
                energy_periods: 1000.0,
            },
            tolerances: Tolerances::default(),
            verify_theta_perturbation: 0.0,
        }
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, or a plain real.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    // The split is the last sign that is neither leading nor an exponent sign.
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => t.parse().ok(),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Config { line, msg: msg.into() }
}

struct Value<'a> {
    line: usize,
    key: &'a str,
    raw: &'a str,
}

impl Value<'_> {
    fn real(&self) -> Result<f64> {
        self.raw
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad(self.line, format!("{}: expected a number, got '{}'", self.key, self.raw)))
    }

    fn positive(&self) -> Result<f64> {
        let v = self.real()?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(bad(self.line, format!("{} must be positive, got {v}", self.key)))
        }
    }

    fn nonnegative(&self) -> Result<f64> {
        let v = self.real()?;
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(bad(self.line, format!("{} must be >= 0, got {v}", self.key)))
        }
    }

    fn count(&self, min: usize) -> Result<usize> {
        match self.raw.parse::<usize>() {
            Ok(v) if v >= min => Ok(v),
            _ => Err(bad(self.line, format!("{}: expected an integer >= {min}, got '{}'", self.key, self.raw))),
        }
    }

    fn flag(&self) -> Result<bool> {
        match self.raw {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(bad(self.line, format!("{}: expected true or false, got '{}'", self.key, self.raw))),
        }
    }

    fn complex(&self) -> Result<Complex64> {
        parse_complex(self.raw)
            .filter(|z| z.re.is_finite() && z.im.is_finite())
            .ok_or_else(|| bad(self.line, format!("{}: expected a complex number like 1+2i, got '{}'", self.key, self.raw)))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, raw) = content
                .split_once('=')
                .ok_or_else(|| bad(line, format!("expected 'key = value', got '{content}'")))?;
            let (key, raw) = (key.trim(), raw.trim());
            if !seen.insert(key.to_string()) {
                return Err(bad(line, format!("duplicate key '{key}'")));
            }
            cfg.set(&Value { line, key, raw })?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn set(&mut self, v: &Value) -> Result<()> {
        let d = &mut self.device;
        let t = &mut self.tolerances;
        let e = &mut self.entropy;
        match v.key {
            "l1" => d.l1 = v.positive()?,
            "l2" => d.l2 = v.positive()?,
            "c1" => d.c1 = v.positive()?,
            "c2" => d.c2 = v.positive()?,
            "gap" => d.gap = v.positive()?,
            "area" => d.area = v.positive()?,
            "eps0" => d.eps0 = v.positive()?,
            "mass" => d.mass = v.positive()?,
            "nu_rad_s" => d.nu = v.positive()?,
            "hbar" => d.hbar = v.positive()?,
            "mean_phonon_number" => self.effective.mean_phonon_number = v.nonnegative()?,
            "zero_point_shift" => self.effective.zero_point_shift = v.flag()?,
            "resonance_tol" => self.resonance_tol = v.positive()?,

            "kappa1_rad_s" => self.readout.kappa1 = Some(v.positive()?),
            "kappa2_rad_s" => self.readout.kappa2 = Some(v.positive()?),
            "drive_rad_s" => self.readout.drive = Some(v.complex()?),
            "current_points" => self.readout.points = v.count(2)?,
            "current_span" => self.readout.span = v.positive()?,
            "strict" => self.readout.strict = v.flag()?,

            "alpha" => e.triple.alpha = v.complex()?,
            "beta" => e.triple.beta = v.complex()?,
            "gamma" => e.triple.gamma = v.complex()?,
            "entropy_terms" => e.terms = v.count(1)?,
            "theta_t_points" => e.theta_t_points = v.count(2)?,
            "alpha_max" => e.alpha_max = v.nonnegative()?,
            "alpha_points" => e.alpha_points = v.count(2)?,
            "oracle_nems_dim" => e.oracle_nems_dim = v.count(1)?,
            "oracle_tlr_dim" => e.oracle_tlr_dim = v.count(1)?,

            "classical_x0" => self.classical.x0 = Some(v.nonnegative()?),
            "classical_nu_rad_s" => self.classical.nu = Some(v.positive()?),
            "classical_periods" => self.classical.periods = v.positive()?,
            "classical_samples_per_period" => self.classical.samples_per_period = v.count(4)?,
            "energy_periods" => self.classical.energy_periods = v.positive()?,

            "tol_current_ratio" => t.current_ratio = v.positive()?,
            "tol_current_ode" => t.current_ode = v.positive()?,
            "tol_elimination" => t.elimination = v.positive()?,
            "tol_elimination_order" => t.elimination_order = v.positive()?,
            "tol_entropy_symmetry" => t.entropy_symmetry = v.positive()?,
            "tol_recurrence" => t.recurrence = v.positive()?,
            "tol_tail" => t.tail = v.positive()?,
            "tol_oracle" => t.oracle = v.positive()?,
            "tol_cat" => t.cat = v.positive()?,
            "tol_separability" => t.separability = v.positive()?,
            "tol_classical" => t.classical = v.positive()?,
            "tol_energy_drift" => t.energy_drift = v.positive()?,

            "verify_theta_perturbation" => self.verify_theta_perturbation = v.real()?,
            other => return Err(bad(v.line, format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        self.device.validate()?;
        let t = &self.entropy.triple;
        CoherentTriple::new(t.alpha, t.beta, t.gamma)?;
        if self.entropy.alpha_max > crate::entanglement::DEFAULT_ALPHA_CAP {
            return Err(bad(0, format!("alpha_max exceeds the cap {}", crate::entanglement::DEFAULT_ALPHA_CAP)));
        }
        Ok(())
    }
}
