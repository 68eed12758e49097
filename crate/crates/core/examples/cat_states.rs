// Conditional NEMS cat states at theta_t = pi.

use nems_tlr::entanglement::{cat_state_check, CoherentTriple};

pub fn run_example() -> nems_tlr::Result<()> {
    let r = cat_state_check(&CoherentTriple::uniform(2.0)?, (30, 30, 30))?;
    println!("even weight {:.6}, odd weight {:.6}", r.even_weight, r.odd_weight);
    println!("<beta,gamma|-beta,-gamma> = {:.3e}", r.projector_overlap);
    println!("even cat fidelity 1 - {:.2e}", 1.0 - r.even_fidelity);
    if let Some(f) = r.odd_fidelity {
        println!("odd cat fidelity  1 - {:.2e}", 1.0 - f);
    }
    println!("reassembled norm {:.15}", r.reassembled_norm);
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
