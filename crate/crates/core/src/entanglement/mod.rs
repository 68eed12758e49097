//! Conditioned-state dynamics of the tripartite coherent input
//! |α⟩_N|β⟩₁|γ⟩₂ under θ·b†b·(a₁†a₂ + a₁a₂†).
//!
//! For each phonon number n the two resonators undergo a beam-splitter
//! rotation by nθt, so the state stays a sum of product branches
//! Σ Cₙ|n⟩|βₙ⟩|γₙ⟩ and all linear entropies reduce to double sums over
//! Gaussian overlaps.

mod oracle;

pub use oracle::{
    brute_force_compare, brute_force_state, cat_state_check, separability_check_12, BruteForceOptions, CatReport,
    OracleComparison, SeparabilityReport,
    separable_mixture,
};

use num_complex::Complex64;

use crate::error::{input, Error, Result};
use crate::poisson;

/// Default cap on |α|.
pub const DEFAULT_ALPHA_CAP: f64 = 6.0;
/// Largest term count `conditioned_state` will raise to.
pub const MAX_TERMS: usize = 256;
/// Tail mass every conditioned state is driven below.
pub const TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentTriple {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl CoherentTriple {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Self> {
        Self::with_cap(alpha, beta, gamma, DEFAULT_ALPHA_CAP)
    }

    pub fn with_cap(alpha: Complex64, beta: Complex64, gamma: Complex64, cap: f64) -> Result<Self> {
        if !(finite(alpha) && finite(beta) && finite(gamma)) {
            return input("coherent amplitudes must be finite");
        }
        if alpha.norm() > cap {
            return input(format!("|alpha| = {} exceeds cap {cap}", alpha.norm()));
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// All three amplitudes real and equal.
    pub fn uniform(a: f64) -> Result<Self> {
        let z = Complex64::new(a, 0.0);
        Self::new(z, z, z)
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.alpha,
            beta: self.gamma,
            gamma: self.beta,
        }
    }
}

/// (βₙ, γₙ) = (β cos nθt − iγ sin nθt, γ cos nθt − iβ sin nθt).
pub fn branch_amplitudes(n: usize, theta_t: f64, beta: Complex64, gamma: Complex64) -> (Complex64, Complex64) {
    let phase = n as f64 * theta_t;
    let (s, c) = phase.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    (beta * c - i * gamma * s, gamma * c - i * beta * s)
}

/// Transmittance sin²((θ₀ + θn_b)t) of the phonon-conditioned beam splitter.
pub fn transmittance(theta0: f64, theta: f64, n_b: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return input(format!("time must be >= 0, got {t}"));
    }
    Ok(((theta0 + theta * n_b) * t).sin().powi(2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedState {
    pub triple: CoherentTriple,
    pub theta_t: f64,
    /// Cₙ = e^{−|α|²/2}αⁿ/√n!, n = 0..terms, not renormalized.
    pub coefficients: Vec<Complex64>,
    pub beta_n: Vec<Complex64>,
    pub gamma_n: Vec<Complex64>,
    /// Poisson mass beyond the last term.
    pub tail: f64,
}

impl ConditionedState {
    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Builds the branch decomposition with at least `n_trunc` terms, raising the
/// count until the tail is below [`TAIL_TOL`].
pub fn conditioned_state(triple: &CoherentTriple, theta_t: f64, n_trunc: usize) -> Result<ConditionedState> {
    if !theta_t.is_finite() {
        return input("theta_t must be finite");
    }
    if n_trunc == 0 {
        return input("need at least one term");
    }
    let lambda = triple.alpha.norm_sqr();
    let mut terms = n_trunc;
    let mut tail = poisson::tail(lambda, terms);
    if tail > TAIL_TOL {
        terms = poisson::required_cutoff(lambda, TAIL_TOL).max(n_trunc);
        if terms > MAX_TERMS {
            return Err(Error::Truncation {
                tail: poisson::tail(lambda, MAX_TERMS),
                tolerance: TAIL_TOL,
                required_dim: terms,
            });
        }
        tail = poisson::tail(lambda, terms);
    }
    // Cₙ from log-factorials; the phase is nθ_α.
    let ln_fact = poisson::ln_factorials(terms);
    let (r, phi) = triple.alpha.to_polar();
    let coefficients = (0..terms)
        .map(|n| {
            if r == 0.0 {
                return Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0);
            }
            let modulus = (-lambda / 2.0 + n as f64 * r.ln() - 0.5 * ln_fact[n]).exp();
            Complex64::from_polar(modulus, n as f64 * phi)
        })
        .collect();
    let (beta_n, gamma_n) = (0..terms)
        .map(|n| branch_amplitudes(n, theta_t, triple.beta, triple.gamma))
        .unzip();
    Ok(ConditionedState {
        triple: *triple,
        theta_t,
        coefficients,
        beta_n,
        gamma_n,
        tail,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    /// E_{N|12}.
    pub e_n_12: f64,
    /// E_{1|N2}.
    pub e_1_n2: f64,
    /// E_{2|N1}.
    pub e_2_n1: f64,
    /// Additive error bound 2·tail on each entropy.
    pub tail_bound: f64,
    pub terms: usize,
}

impl EntropyReport {
    pub fn as_array(&self) -> [f64; 3] {
        [self.e_n_12, self.e_1_n2, self.e_2_n1]
    }
}

fn clamp_entropy(x: f64) -> f64 {
    x.clamp(0.0, 1.0 - f64::EPSILON)
}

/// The three bipartite linear entropies
/// 1 − Σ|Cₙ|²|Cₘ|²e^{−…} over the branch overlaps.
///
/// Summed as 2Σ_{n<m}|Cₙ|²|Cₘ|²(1 − e^{−…}), which equals the above for unit
/// total weight, vanishes exactly for coincident branches and avoids the
/// cancellation of 1 − Σ. The terms dropped by truncation add at most 2·tail.
pub fn linear_entropies(state: &ConditionedState) -> EntropyReport {
    let w = state.weights();
    let n = w.len();
    let (mut e_n, mut e_1, mut e_2) = (0.0, 0.0, 0.0);
    for a in 0..n {
        if w[a] == 0.0 {
            continue;
        }
        for b in a + 1..n {
            let ww = 2.0 * w[a] * w[b];
            if ww == 0.0 {
                continue;
            }
            let d1 = (state.beta_n[a] - state.beta_n[b]).norm_sqr();
            let d2 = (state.gamma_n[a] - state.gamma_n[b]).norm_sqr();
            e_n -= ww * (-(d1 + d2)).exp_m1();
            e_1 -= ww * (-d1).exp_m1();
            e_2 -= ww * (-d2).exp_m1();
        }
    }
    EntropyReport {
        e_n_12: clamp_entropy(e_n),
        e_1_n2: clamp_entropy(e_1),
        e_2_n1: clamp_entropy(e_2),
        tail_bound: 2.0 * state.tail,
        terms: n,
    }
}

/// Entropies at each phase in `theta_ts`.
pub fn entropy_series(triple: &CoherentTriple, theta_ts: &[f64], n_trunc: usize) -> Result<Vec<EntropyReport>> {
    theta_ts
        .iter()
        .map(|&tt| conditioned_state(triple, tt, n_trunc).map(|s| linear_entropies(&s)))
        .collect()
}

/// Upper bound 1 − Σ|Cₙ|⁴ on E_{N|12}, reached when the branches are orthogonal.
pub fn orthogonal_branch_bound(state: &ConditionedState) -> f64 {
    1.0 - state.weights().iter().map(|w| w * w).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_examples() {
        let (b, g) = (c(0.3, -1.2), c(2.0, 0.5));
        for t in [0.0, 0.4, 7.0] {
            assert_eq!(branch_amplitudes(0, t, b, g), (b, g));
        }
        for n in 0..7 {
            let (bn, gn) = branch_amplitudes(n, PI, b, g);
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((bn - b * s).norm() < 1e-14 && (gn - g * s).norm() < 1e-14);
        }
        let (bn, gn) = branch_amplitudes(1, FRAC_PI_2, b, g);
        assert!((bn - c(0.0, -1.0) * g).norm() < 1e-15);
        assert!((gn - c(0.0, -1.0) * b).norm() < 1e-15);
    }

    #[test]
    fn transmittance_examples() {
        assert_eq!(transmittance(1.0, -0.1, 2.0, 0.0).unwrap(), 0.0);
        assert!((transmittance(1.0, 0.5, 1.0, FRAC_PI_2 / 1.5).unwrap() - 1.0).abs() < 1e-15);
        let t0 = transmittance(0.7, 0.0, 0.0, 1.3).unwrap();
        for n in [1.0, 5.0, 40.0] {
            assert_eq!(transmittance(0.7, 0.0, n, 1.3).unwrap(), t0);
        }
        assert!(transmittance(1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn vacuum_nems_is_product() {
        let t = CoherentTriple::new(c(0.0, 0.0), c(1.0, 0.5), c(-2.0, 0.0)).unwrap();
        for tt in [0.0, 0.9, 3.0] {
            let s = conditioned_state(&t, tt, 30).unwrap();
            assert_eq!(s.coefficients[0], c(1.0, 0.0));
            assert!(s.coefficients[1..].iter().all(|x| *x == c(0.0, 0.0)));
            assert_eq!(s.tail, 0.0);
            assert_eq!(linear_entropies(&s).as_array(), [0.0; 3]);
        }
    }

    #[test]
    fn thirty_terms_tail_at_alpha_two() {
        let s = conditioned_state(&CoherentTriple::uniform(2.0).unwrap(), 1.0, 30).unwrap();
        assert_eq!(s.terms(), 30);
        assert!(s.tail > 1e-18 && s.tail < 1e-16, "{}", s.tail);
        let mass: f64 = s.weights().iter().sum();
        assert!((1.0 - mass).abs() <= s.tail + 1e-15);
    }

    #[test]
    fn terms_raised_for_large_alpha() {
        let t = CoherentTriple::uniform(5.0).unwrap();
        let s = conditioned_state(&t, 0.3, 30).unwrap();
        assert!(s.terms() > 30);
        assert!(s.tail <= TAIL_TOL);
        assert!(CoherentTriple::uniform(6.5).is_err());
        let big = CoherentTriple::with_cap(c(16.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), 20.0).unwrap();
        assert!(matches!(conditioned_state(&big, 0.1, 30), Err(Error::Truncation { .. })));
    }

    #[test]
    fn recurrence_at_two_pi() {
        let t = CoherentTriple::uniform(2.0).unwrap();
        let s = conditioned_state(&t, 2.0 * PI, 30).unwrap();
        for (bn, gn) in s.beta_n.iter().zip(&s.gamma_n) {
            assert!((bn - t.beta).norm() < 1e-12 && (gn - t.gamma).norm() < 1e-12);
        }
        let e = linear_entropies(&s);
        assert!(e.as_array().iter().all(|x| *x < 1e-10));
    }

    #[test]
    fn equal_tlr_amplitudes_give_equal_entropies() {
        let t = CoherentTriple::new(c(2.0, 0.0), c(1.0, 2.0), c(1.0, 2.0)).unwrap();
        for tt in [0.3, 1.1, 2.5] {
            let e = linear_entropies(&conditioned_state(&t, tt, 30).unwrap());
            assert_eq!(e.e_1_n2, e.e_2_n1);
            assert!(e.e_n_12 > 0.0);
        }
    }
}
