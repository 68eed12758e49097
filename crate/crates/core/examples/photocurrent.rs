// Mean photocurrent for n_b = 1, 2, 3 and the stationary statistics of a
// Poisson phonon state.

use nems_tlr::cli::readout_params;
use nems_tlr::config::RunConfig;
use nems_tlr::readout::{mean_photocurrent, stationary_current_statistics, PhononDistribution};

pub fn run_example() -> nems_tlr::Result<()> {
    let p = readout_params(&RunConfig::default())?;
    let g = p.stationary_gain();
    println!("alpha2 = {:.3}, Gamma = {:.4e} rad/s, G = {:.4e} A", p.alpha2(), p.gamma(), g);
    println!("   s      I/G(n=1)  I/G(n=2)  I/G(n=3)");
    for k in 0..=10 {
        let s = k as f64;
        let t = 2.0 * s / p.total_rate();
        let row: Vec<String> = (1..=3)
            .map(|n| mean_photocurrent(t, n as f64, &p).map(|i| format!("{:8.5}", i / g)))
            .collect::<nems_tlr::Result<_>>()?;
        println!("{s:5.1}  {}", row.join("  "));
    }
    let stats = stationary_current_statistics(&PhononDistribution::poisson(2.0)?, &p)?;
    println!(
        "Poisson(2): mean {:.4e} A, signal variance / G^2 = {:.6}",
        stats.mean,
        stats.signal_variance / (g * g)
    );
    Ok(())
}

fn main() -> nems_tlr::Result<()> {
    run_example()
}
