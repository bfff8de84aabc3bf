//! Excited-band population pumped by the phonon drive, from both starting
//! bands, at a momentum where the cycle crosses the transition and at one
//! far away from it.

use geopump::band::DriveParams;
use geopump::propagator::{evolve, weighted_initial_state, TrotterConfig};

fn main() -> geopump::Result<()> {
    let cfg = TrotterConfig::default().with_cycles(200);
    for (k, eps0) in [(0.005, -0.95), (0.3, -0.95), (0.005, -0.8)] {
        let p = DriveParams::default().with_k(k).with_eps0(eps0);
        let down = evolve(&p, &cfg, None)?;
        let up = evolve(&p, &cfg, Some(weighted_initial_state(&p, 1.0)?))?;
        println!(
            "k = {k:<6} ε₀ = {eps0:<6} p_n after 10/100/200 cycles: {:.4} {:.4} {:.4}  (excited start: {:.4})",
            down.p_n[9],
            down.p_n[99],
            down.p_n[199],
            up.final_mean()
        );
    }
    Ok(())
}
