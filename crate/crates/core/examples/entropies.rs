// Linear entropies of the three bipartitions for alpha = beta = gamma = 2.

use nems_tlr::entanglement::{entropy_series, CoherentTriple};
use nems_tlr::ode::linspace;

pub fn run_example() -> nems_tlr::Result<()> {
    let t = CoherentTriple::uniform(2.0)?;
    let grid = linspace(0.0, 2.0 * std::f64::consts::PI, 13);
    println!(" theta_t   E_N|12    E_1|N2    E_2|N1");
    for (tt, e) in grid.iter().zip(entropy_series(&t, &grid, 30)?) {
        println!("{tt:7.3}  {:.6}  {:.6}  {:.6}", e.e_n_12, e.e_1_n2, e.e_2_n1);
    }
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
