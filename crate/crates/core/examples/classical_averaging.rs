// Kirchhoff dynamics with a fast-moving beam: the Q1 spectrum sits at the
// averaged normal modes, close to omega~.

use nems_tlr::circuit::{averaging_check, effective_params, energy_drift, CircuitState, PhysicalCircuitParams};

pub fn run_example() -> nems_tlr::Result<()> {
    let p = PhysicalCircuitParams::default();
    let w = effective_params(&p)?.omega_tilde1;
    let x0 = p.gap * 2e-6f64.sqrt();
    let start = CircuitState {
        q1: 1e-18,
        ..Default::default()
    };
    let r = averaging_check(&p, start, x0, 20.0 * w, 400.0, 16)?;
    println!("peak {:.6e} rad/s, omega~ {:.6e} rad/s, off by {:.3}%", r.peak, r.omega_tilde, 100.0 * r.relative_error);
    println!("averaged modes {:.6e}, {:.6e} rad/s", r.averaged_modes.0, r.averaged_modes.1);
    let drift = energy_drift(&p, start, 1000.0, 1e-12)?;
    println!("energy drift over 1000 periods with x = 0: {drift:.2e}");
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
