// Branch-sum entropies against exact evolution in a truncated Fock space,
// with and without the theta0 term.

use nems_tlr::entanglement::{brute_force_compare, separability_check_12, BruteForceOptions, CoherentTriple};
use num_complex::Complex64;

pub fn run_example() -> nems_tlr::Result<()> {
    let t = CoherentTriple::new(Complex64::new(1.0, 0.0), Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.5))?;
    let dims = (16, 24, 24);
    for tt in [0.5, 1.5, std::f64::consts::PI] {
        let r = brute_force_compare(&t, tt, dims, &BruteForceOptions::default())?;
        println!("theta_t = {tt:.3}: discrepancy {:.2e}", r.max_discrepancy());
    }
    let with_theta0 = BruteForceOptions {
        theta0_ratio: Some(0.5),
        ..Default::default()
    };
    let r = brute_force_compare(&t, 1.5, dims, &with_theta0)?;
    println!("with theta0: discrepancies N|12 {:.2e}, 1|N2 {:.2e}, 2|N1 {:.2e}", r.discrepancy[0], r.discrepancy[1], r.discrepancy[2]);
    let s = separability_check_12(&t, 1.5, dims)?;
    println!("rho12 vs separable mixture: {:.2e}", s.max_deviation);
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
