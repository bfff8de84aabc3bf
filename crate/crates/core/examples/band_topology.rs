//! Gap statistics and winding numbers along the phonon cycle.

use geopump::band::{gap_stats, tpt_in_cycle, winding_number, DriveParams};

fn main() -> geopump::Result<()> {
    for eps in [-0.5, -1.5] {
        println!("winding(ε_eff = {eps}) = {}", winding_number(eps)?);
    }
    let base = DriveParams::default();
    println!("ω = {:.6}, period = {:.1} model time units", base.omega, base.period());
    println!("{:>7} {:>5} {:>9} {:>9} {:>9}", "eps0", "Δν", "Δ_int", "Δ_min", "Δ_avg");
    for eps0 in [-1.2, -0.95, -0.8] {
        let p = base.with_eps0(eps0).with_k(0.005);
        let g = gap_stats(&p, 1024)?;
        let tpt = tpt_in_cycle(&p)?;
        println!("{eps0:>7} {:>5} {:>9.5} {:>9.5} {:>9.5}", tpt.delta_nu, g.delta_int, g.delta_min, g.delta_avg);
    }
    Ok(())
}
