// Coherent states, a beam-splitter swap and a partial trace in a small space.

use nems_tlr::fock::{coherent_state, evolve_sparse, Mode, Operator, SparseOperator, StateVector, TruncatedSpace};
use num_complex::Complex64;

pub fn run_example() -> nems_tlr::Result<()> {
    let (d1, d2) = (16, 16);
    let space = TruncatedSpace::new(&[(Mode::Tlr1, d1), (Mode::Tlr2, d2)])?;
    let b = coherent_state(Mode::Tlr1, Complex64::new(1.0, 0.0), d1)?;
    let g = coherent_state(Mode::Tlr2, Complex64::new(0.0, 0.0), d2)?;
    let psi = StateVector::product(&[&b, &g])?;

    let hop = SparseOperator::product_term(&space, &[&Operator::creation(Mode::Tlr1, d1)?, &Operator::annihilation(Mode::Tlr2, d2)?])?;
    let h = hop.add(&hop.adjoint())?;
    let n2 = SparseOperator::product_term(&space, &[&Operator::number(Mode::Tlr2, d2)?])?;
    for k in 0..=4 {
        let t = k as f64 * std::f64::consts::FRAC_PI_8;
        let out = evolve_sparse(&h, t, &psi)?;
        let rho1 = out.reduced_density(&[Mode::Tlr1])?;
        println!(
            "t = {t:.3}: <n2> = {:.6}, purity of mode 1 = {:.12}",
            out.expectation_sparse(&n2)?.re,
            rho1.purity()
        );
    }
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
