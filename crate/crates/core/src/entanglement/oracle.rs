//! Cross-checks of the branch formulas against exact evolution in a
//! truncated Fock space.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{conditioned_state, linear_entropies, CoherentTriple, EntropyReport};
use crate::error::{Error, Result};
use crate::fock::{
    coherent_state_with_tail, evolve_sparse, fidelity, DensityMatrix, Mode, Operator, SparseOperator, StateVector,
    TruncatedSpace,
};
use crate::fock::state::DEFAULT_TAIL_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceOptions {
    /// θ₀/θ; `None` drops the phonon-independent term.
    pub theta0_ratio: Option<f64>,
    /// Tail allowed on each initial coherent state.
    pub tail_tol: f64,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self {
            theta0_ratio: None,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

fn hamiltonian(space: &TruncatedSpace, theta0_ratio: Option<f64>) -> Result<SparseOperator> {
    let d = space.dims();
    let nb = Operator::number(Mode::Nems, d[0])?;
    let a1d = Operator::creation(Mode::Tlr1, d[1])?;
    let a2 = Operator::annihilation(Mode::Tlr2, d[2])?;
    let hop = SparseOperator::product_term(space, &[&nb, &a1d, &a2])?;
    let mut h = hop.add(&hop.adjoint())?;
    if let Some(r) = theta0_ratio {
        let bare = SparseOperator::product_term(space, &[&a1d, &a2])?;
        h = h.add(&bare.add(&bare.adjoint())?.scale(Complex64::new(r, 0.0)))?;
    }
    Ok(h)
}

/// |α⟩|β⟩|γ⟩ evolved for phase θt under θ·(θ₀/θ + b†b)(a₁†a₂ + a₁a₂†)
/// with θ = 1, in a space of cutoffs `dims` = (N, TLR-1, TLR-2).
pub fn brute_force_state(
    triple: &CoherentTriple,
    theta_t: f64,
    dims: (usize, usize, usize),
    opts: &BruteForceOptions,
) -> Result<StateVector> {
    let space = TruncatedSpace::tripartite(dims.0, dims.1, dims.2)?;
    let n = coherent_state_with_tail(Mode::Nems, triple.alpha, dims.0, opts.tail_tol)?.state;
    let b = coherent_state_with_tail(Mode::Tlr1, triple.beta, dims.1, opts.tail_tol)?.state;
    let g = coherent_state_with_tail(Mode::Tlr2, triple.gamma, dims.2, opts.tail_tol)?.state;
    let psi0 = StateVector::product(&[&n, &b, &g])?;
    let h = hamiltonian(&space, opts.theta0_ratio)?;
    evolve_sparse(&h, theta_t, &psi0)
}

fn pure_entropies(psi: &StateVector) -> Result<[f64; 3]> {
    Ok([
        psi.reduced_density(&[Mode::Nems])?.linear_entropy(),
        psi.reduced_density(&[Mode::Tlr1])?.linear_entropy(),
        psi.reduced_density(&[Mode::Tlr2])?.linear_entropy(),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub analytic: EntropyReport,
    /// Partial-trace entropies in the order N|12, 1|N2, 2|N1.
    pub brute: [f64; 3],
    pub discrepancy: [f64; 3],
}

impl OracleComparison {
    pub fn max_discrepancy(&self) -> f64 {
        self.discrepancy.iter().cloned().fold(0.0, f64::max)
    }
}

/// Analytic entropies against partial traces of the exactly evolved state.
pub fn brute_force_compare(
    triple: &CoherentTriple,
    theta_t: f64,
    dims: (usize, usize, usize),
    opts: &BruteForceOptions,
) -> Result<OracleComparison> {
    let psi = brute_force_state(triple, theta_t, dims, opts)?;
    let brute = pure_entropies(&psi)?;
    let analytic = linear_entropies(&conditioned_state(triple, theta_t, dims.0)?);
    let a = analytic.as_array();
    let discrepancy = [
        (a[0] - brute[0]).abs(),
        (a[1] - brute[1]).abs(),
        (a[2] - brute[2]).abs(),
    ];
    Ok(OracleComparison {
        analytic,
        brute,
        discrepancy,
    })
}

/// Untruncated coherent amplitudes for levels 0..dim, without renormalizing.
fn coherent_amplitudes(z: Complex64, dim: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    let mut c = Complex64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    v[0] = c;
    for n in 1..dim {
        c = c * z / (n as f64).sqrt();
        v[n] = c;
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    /// Largest entrywise |ρ₁₂ − Σ|Cₙ|²|βₙ⟩⟨βₙ|⊗|γₙ⟩⟨γₙ||.
    pub max_deviation: f64,
    pub mixture_trace: f64,
    /// Tail mass of the NEMS weights beyond the cutoff.
    pub tail: f64,
}

/// Compares the brute-force ρ₁₂ = Tr_N|ψ⟩⟨ψ| with the explicit separable
/// mixture over phonon branches.
pub fn separability_check_12(
    triple: &CoherentTriple,
    theta_t: f64,
    dims: (usize, usize, usize),
) -> Result<SeparabilityReport> {
    let psi = brute_force_state(triple, theta_t, dims, &BruteForceOptions::default())?;
    let rho = psi.reduced_density(&[Mode::Tlr1, Mode::Tlr2])?;
    let state = conditioned_state(triple, theta_t, dims.0)?;
    let d = dims.1 * dims.2;
    let mut mix = DMatrix::<Complex64>::zeros(d, d);
    for n in 0..dims.0.min(state.terms()) {
        let w = state.coefficients[n].norm_sqr();
        if w == 0.0 {
            continue;
        }
        let v = coherent_amplitudes(state.beta_n[n], dims.1).kronecker(&coherent_amplitudes(state.gamma_n[n], dims.2));
        mix += (&v * v.adjoint()) * Complex64::new(w, 0.0);
    }
    let max_deviation = (rho.matrix() - &mix).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SeparabilityReport {
        max_deviation,
        mixture_trace: mix.trace().re,
        tail: state.tail,
    })
}

/// Smallest 1 − |⟨β,γ|−β,−γ⟩|² accepted before the two TLR projectors are
/// treated as coinciding.
pub const PROJECTOR_SEPARATION_MIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CatReport {
    /// e^{−|α|²}cosh|α|².
    pub even_weight: f64,
    /// e^{−|α|²}sinh|α|².
    pub odd_weight: f64,
    /// ⟨β|−β⟩⟨γ|−γ⟩ = e^{−2|β|²−2|γ|²}.
    pub projector_overlap: f64,
    /// Fidelity of the NEMS state after projecting the TLRs on |β⟩|γ⟩ with
    /// the normalized even cat.
    pub even_fidelity: f64,
    /// Same for |−β⟩|−γ⟩ and the odd cat; `None` when the odd branch has no weight.
    pub odd_fidelity: Option<f64>,
    /// Norm of c₊|α₊⟩|β⟩|γ⟩ + c₋|α₋⟩|−β⟩|−γ⟩ built from normalized cats.
    pub reassembled_norm: f64,
    /// Its fidelity with the evolved state.
    pub reassembled_fidelity: f64,
}

fn cat(alpha: Complex64, dim: usize, sign: f64) -> Result<Option<StateVector>> {
    let space = TruncatedSpace::single(Mode::Nems, dim)?;
    let v = coherent_amplitudes(alpha, dim) + coherent_amplitudes(-alpha, dim) * Complex64::new(sign, 0.0);
    if v.norm() < 1e-150 {
        return Ok(None);
    }
    StateVector::normalized(space, v).map(Some)
}

/// Evolves to θt = π and checks the conditional NEMS states against the
/// even and odd coherent cats.
pub fn cat_state_check(triple: &CoherentTriple, dims: (usize, usize, usize)) -> Result<CatReport> {
    let lambda_b = triple.beta.norm_sqr();
    let lambda_g = triple.gamma.norm_sqr();
    let projector_overlap = (-2.0 * (lambda_b + lambda_g)).exp();
    if 1.0 - projector_overlap * projector_overlap < PROJECTOR_SEPARATION_MIN {
        return Err(Error::Conditioning(format!(
            "TLR projectors |beta,gamma> and |-beta,-gamma> coincide (overlap {projector_overlap:.6})"
        )));
    }
    let opts = BruteForceOptions::default();
    let psi = brute_force_state(triple, std::f64::consts::PI, dims, &opts)?;
    let tlr = |b: Complex64, g: Complex64| -> Result<StateVector> {
        let b = coherent_state_with_tail(Mode::Tlr1, b, dims.1, opts.tail_tol)?.state;
        let g = coherent_state_with_tail(Mode::Tlr2, g, dims.2, opts.tail_tol)?.state;
        b.tensor(&g)
    };
    let plus = tlr(triple.beta, triple.gamma)?;
    let minus = tlr(-triple.beta, -triple.gamma)?;

    let lambda = triple.alpha.norm_sqr();
    let even_weight = (-lambda).exp() * lambda.cosh();
    let odd_weight = (-lambda).exp() * lambda.sinh();
    let even_cat = cat(triple.alpha, dims.0, 1.0)?.expect("even cat never vanishes");
    let odd_cat = if odd_weight > 0.0 { cat(triple.alpha, dims.0, -1.0)? } else { None };

    let conditional = |outcome: &StateVector, label: &str| -> Result<StateVector> {
        let c = psi.condition_on(outcome)?;
        c.state.ok_or_else(|| Error::Conditioning(format!("{label} projection has zero probability")))
    };
    let even_fidelity = fidelity(&conditional(&plus, "even")?, &even_cat)?;
    let odd_fidelity = match &odd_cat {
        Some(odd) => Some(fidelity(&conditional(&minus, "odd")?, odd)?),
        None => None,
    };

    let space = psi.space().clone();
    let mut v = StateVector::product(&[&even_cat, &plus])?.data() * Complex64::new(even_weight.sqrt(), 0.0);
    if let Some(odd) = &odd_cat {
        v += StateVector::product(&[odd, &minus])?.data() * Complex64::new(odd_weight.sqrt(), 0.0);
    }
    let reassembled_norm = v.norm();
    let reassembled = StateVector::normalized(space, v)?;
    Ok(CatReport {
        even_weight,
        odd_weight,
        projector_overlap,
        even_fidelity,
        odd_fidelity,
        reassembled_norm,
        reassembled_fidelity: fidelity(&reassembled, &psi)?,
    })
}

/// Density matrix of the separable mixture, for callers that want the full object.
pub fn separable_mixture(triple: &CoherentTriple, theta_t: f64, dims: (usize, usize, usize)) -> Result<DensityMatrix> {
    let state = conditioned_state(triple, theta_t, dims.0)?;
    let space = TruncatedSpace::new(&[(Mode::Tlr1, dims.1), (Mode::Tlr2, dims.2)])?;
    let d = space.dim();
    let mut mix = DMatrix::<Complex64>::zeros(d, d);
    for n in 0..dims.0.min(state.terms()) {
        let w = state.coefficients[n].norm_sqr();
        let v = coherent_amplitudes(state.beta_n[n], dims.1).kronecker(&coherent_amplitudes(state.gamma_n[n], dims.2));
        mix += (&v * v.adjoint()) * Complex64::new(w, 0.0);
    }
    let trace = mix.trace();
    DensityMatrix::new(space, mix / trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_time_agrees_exactly() {
        let t = CoherentTriple::uniform(1.0).unwrap();
        let r = brute_force_compare(&t, 0.0, (16, 16, 16), &BruteForceOptions::default()).unwrap();
        assert!(r.max_discrepancy() < 1e-12, "{:?}", r);
    }

    #[test]
    fn unit_amplitudes_agree() {
        let t = CoherentTriple::uniform(1.0).unwrap();
        for tt in [0.5, 1.5, PI] {
            let r = brute_force_compare(&t, tt, (16, 16, 16), &BruteForceOptions::default()).unwrap();
            assert!(r.max_discrepancy() <= 1e-6, "theta_t={tt}: {:?}", r);
        }
    }

    #[test]
    fn theta0_only_rotates_the_resonators() {
        let t = CoherentTriple::new(c(1.0, 0.0), c(1.2, 0.0), c(0.0, 0.4)).unwrap();
        let opts = BruteForceOptions {
            theta0_ratio: Some(0.7),
            ..Default::default()
        };
        let r = brute_force_compare(&t, 1.1, (16, 18, 18), &opts).unwrap();
        assert!(r.discrepancy[0] < 1e-9, "{:?}", r);
        assert!(r.discrepancy[1] > 1e-4, "{:?}", r);
    }

    #[test]
    fn cat_at_small_cutoffs() {
        let t = CoherentTriple::uniform(1.5).unwrap();
        let r = cat_state_check(&t, (20, 24, 24)).unwrap();
        // The projectors overlap by o, leaking the other parity branch:
        // F₊ = c₊²/(c₊² + o²c₋²).
        let o2 = r.projector_overlap.powi(2);
        let even = r.even_weight / (r.even_weight + o2 * r.odd_weight);
        let odd = r.odd_weight / (r.odd_weight + o2 * r.even_weight);
        assert!((r.even_fidelity - even).abs() < 1e-12, "{:?}", r);
        assert!((r.odd_fidelity.unwrap() - odd).abs() < 1e-12);
        assert!(1.0 - r.even_fidelity > 1e-9);
        assert!((r.reassembled_norm - 1.0).abs() < 1e-10);
        assert!((r.reassembled_fidelity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vacuum_nems_cat() {
        let t = CoherentTriple::new(c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)).unwrap();
        let r = cat_state_check(&t, (8, 30, 30)).unwrap();
        assert!((r.even_fidelity - 1.0).abs() < 1e-12);
        assert_eq!(r.odd_weight, 0.0);
        assert!(r.odd_fidelity.is_none());
    }

    #[test]
    fn degenerate_projectors_rejected() {
        let t = CoherentTriple::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(matches!(cat_state_check(&t, (10, 4, 4)), Err(Error::Conditioning(_))));
    }

    #[test]
    fn separable_at_small_cutoffs() {
        let t = CoherentTriple::uniform(1.0).unwrap();
        for tt in [0.0, FRAC_PI_2, 2.0 * PI] {
            let r = separability_check_12(&t, tt, (16, 24, 24)).unwrap();
            assert!(r.max_deviation < 1e-8, "{tt}: {:?}", r);
            assert!((r.mixture_trace - 1.0).abs() < 1e-8);
        }
        let m = separable_mixture(&t, 1.0, (12, 12, 12)).unwrap();
        assert!((m.trace().re - 1.0).abs() < 1e-12);
    }
}
