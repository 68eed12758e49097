#![allow(dead_code)]

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use nems_tlr::entanglement::{
    branch_amplitudes, conditioned_state, linear_entropies, orthogonal_branch_bound, CoherentTriple,
};
use nems_tlr::fock::{evolve, Mode, Operator, StateVector, TruncatedSpace};

pub type Check = Result<(), TestCaseError>;

/// Complex number inside the disc of radius `r`.
pub fn disc(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..=r, 0.0..TAU).prop_map(|(m, phi)| Complex64::from_polar(m, phi))
}

pub fn triple(r: f64) -> impl Strategy<Value = CoherentTriple> {
    (disc(r), disc(r), disc(r)).prop_map(|(alpha, beta, gamma)| CoherentTriple { alpha, beta, gamma })
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Check {
    prop_assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
    Ok(())
}

pub fn branch_unitarity(beta: Complex64, gamma: Complex64, n: usize, theta_t: f64) -> Check {
    let (bn, gn) = branch_amplitudes(n, theta_t, beta, gamma);
    close(bn.norm_sqr() + gn.norm_sqr(), beta.norm_sqr() + gamma.norm_sqr(), 1e-12, "branch norm")
}

pub fn periodicity(t: CoherentTriple, theta_t: f64) -> Check {
    let a = linear_entropies(&conditioned_state(&t, theta_t, 30).unwrap()).as_array();
    let b = linear_entropies(&conditioned_state(&t, theta_t + TAU, 30).unwrap()).as_array();
    for k in 0..3 {
        close(a[k], b[k], 1e-10, "2π shift")?;
    }
    Ok(())
}

pub fn swap_symmetry(t: CoherentTriple, theta_t: f64) -> Check {
    let a = linear_entropies(&conditioned_state(&t, theta_t, 30).unwrap());
    let b = linear_entropies(&conditioned_state(&t.swapped(), theta_t, 30).unwrap());
    close(a.e_1_n2, b.e_2_n1, 1e-14, "E_1|N2 ↔ E_2|N1")?;
    close(a.e_2_n1, b.e_1_n2, 1e-14, "E_2|N1 ↔ E_1|N2")?;
    close(a.e_n_12, b.e_n_12, 1e-14, "E_N|12 fixed")
}

pub fn phase_invariance(t: CoherentTriple, theta_t: f64, phi: f64) -> Check {
    let rotated = CoherentTriple {
        alpha: t.alpha * Complex64::from_polar(1.0, phi),
        ..t
    };
    let a = linear_entropies(&conditioned_state(&t, theta_t, 30).unwrap()).as_array();
    let b = linear_entropies(&conditioned_state(&rotated, theta_t, 30).unwrap()).as_array();
    for k in 0..3 {
        close(a[k], b[k], 1e-14, "phase of alpha")?;
    }
    Ok(())
}

pub fn entropy_bounds(t: CoherentTriple, theta_t: f64) -> Check {
    let s = conditioned_state(&t, theta_t, 30).unwrap();
    let e = linear_entropies(&s);
    let bound = orthogonal_branch_bound(&s) + e.tail_bound + 1e-14;
    for x in e.as_array() {
        prop_assert!((0.0..1.0).contains(&x));
    }
    prop_assert!(e.e_n_12 <= bound, "{} > {}", e.e_n_12, bound);
    // Tracing out more of the branch label cannot purify more.
    prop_assert!(e.e_1_n2 <= e.e_n_12 + 1e-14 && e.e_2_n1 <= e.e_n_12 + 1e-14);
    Ok(())
}

/// [a, a†] = diag(1, …, 1, −(d−1)) on the truncated space.
pub fn truncated_commutator(dim: usize) -> Check {
    let a = Operator::annihilation(Mode::Tlr1, dim).unwrap();
    let c = a.commutator(&a.adjoint()).unwrap();
    let m = c.matrix();
    let tol = 4.0 * f64::EPSILON * dim as f64;
    for i in 0..dim {
        for j in 0..dim {
            let want = match (i == j, i + 1 == dim) {
                (true, false) => 1.0,
                (true, true) => -((dim - 1) as f64),
                _ => 0.0,
            };
            prop_assert!((m[(i, j)] - Complex64::new(want, 0.0)).norm() <= tol, "entry ({i},{j})");
        }
    }
    Ok(())
}

/// Random Hermitian matrix from 2d² reals.
pub fn hermitian(dim: usize, raw: &[f64]) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(dim, dim, |i, j| Complex64::new(raw[2 * (i * dim + j)], raw[2 * (i * dim + j) + 1]));
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn hermitian_case() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, f64)> {
    (2usize..=12).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec(-1.0..1.0f64, 2 * d * d),
            prop::collection::vec(-1.0..1.0f64, 2 * d),
            -1e3..1e3f64,
        )
    })
}

pub fn evolution_unitarity(dim: usize, h_raw: &[f64], psi_raw: &[f64], t: f64) -> Check {
    let space = TruncatedSpace::single(Mode::Nems, dim).unwrap();
    let h = Operator::from_matrix(space.clone(), hermitian(dim, h_raw)).unwrap();
    let v = DVector::from_fn(dim, |i, _| Complex64::new(psi_raw[2 * i], psi_raw[2 * i + 1]));
    prop_assume!(v.norm() > 1e-3);
    let psi = StateVector::normalized(space, v).unwrap();
    let out = evolve(&h, t, &psi).unwrap();
    close(out.norm(), 1.0, 1e-10, "norm after evolution")
}
