//! Occupancy rule for geometric pumping against the Fermi golden rule,
//! across temperature and the band-inversion point.

use geopump::thermo::{gp_probability, temperature_sweep, ThermalModel};

fn main() -> geopump::Result<()> {
    println!("corner table (f_v, f_c) -> P_gp with Δν = 1");
    for (fv, fc) in [(1.0, 1.0), (0.0, 1.0), (1.0, 0.0), (0.0, 0.0)] {
        println!("  ({fv}, {fc}) -> {}", gp_probability(fv, fc, 1)?);
    }

    let m = ThermalModel::default();
    let temps: Vec<f64> = (0..=300).step_by(20).map(f64::from).collect();
    let c = temperature_sweep(&m, &temps)?;
    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "T [K]", "gap", "mu", "q_gp", "q_fgr");
    for i in 0..temps.len() {
        println!("{:>6} {:>8.2} {:>8.2} {:>8.4} {:>8.4}", temps[i], c.gap[i], c.mu[i], c.q_gp[i], c.q_fgr[i]);
    }
    Ok(())
}
