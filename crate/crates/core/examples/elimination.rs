// Full two-mode mean dynamics against the adiabatically eliminated model.

use nems_tlr::cli::{elimination_sweep, fitted_order};

pub fn run_example() -> nems_tlr::Result<()> {
    let sweep = elimination_sweep(&[1e-1, 3e-2, 1e-2, 3e-3, 1e-3])?;
    for (r, e) in &sweep {
        println!("theta0/kappa2 = {r:.0e}  relative error {e:.3e}");
    }
    println!("fitted order {:.3}", fitted_order(&sweep));
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
