// Effective couplings of the default device and of a device with C = 2·C_eq.

use nems_tlr::circuit::{effective_params, equilibrium_capacitance, x_rms, PhysicalCircuitParams};

pub fn run_example() -> nems_tlr::Result<()> {
    let p = PhysicalCircuitParams::default();
    let e = effective_params(&p)?;
    println!("C_eq       {:.4e} F", e.ceq);
    println!("omega~     {:.4e} rad/s", e.omega_tilde1);
    println!("theta0     {:.4e} rad/s", e.theta0);
    println!("theta      {:.4e} rad/s", e.theta);
    println!("theta/th0  {:.3e}", e.theta_ratio());
    println!("x_rms      {:.4e} m", x_rms(&p, 0.0)?);

    let ceq = equilibrium_capacitance(&p);
    let q = PhysicalCircuitParams {
        c1: 2.0 * ceq,
        c2: 2.0 * ceq,
        ..p
    };
    let e = effective_params(&q)?;
    println!("C = 2 C_eq gives C~/C_eq = {:.15}", e.ctilde1 / ceq);
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
