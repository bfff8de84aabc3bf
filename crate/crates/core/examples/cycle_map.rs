//! The single-cycle SU(2) map: closed-form p_∞ against the running mean of
//! repeated application, and against the orbit average on the Bloch sphere.

use std::f64::consts::PI;

use geopump::cyclemap::{orbit_axis, p_g_closed, p_infinity_orbit, p_series, theta_from_tpt, CycleParams};

fn main() -> geopump::Result<()> {
    for dnu in [0, 1] {
        let c = CycleParams::new(theta_from_tpt(dnu)?, 0.7, 0.0)?;
        println!("Δν = {dnu}: Θ = {:.4}, p_∞ = {}", c.theta, p_g_closed(&c));
    }

    let c = CycleParams::new(PI / 3.0, 1.1, 0.4)?;
    let series = p_series(&c, 100_000)?;
    let axis = orbit_axis(&c)?;
    println!("Θ = π/3, Φ = 1.1, Ω = 0.4");
    println!("  p_1..p_4      {:?}", &series[..4]);
    println!("  p_100000      {:.8}", series[series.len() - 1]);
    println!("  closed form   {:.8}", p_g_closed(&c));
    println!("  orbit (α = {:.4}, β = {:.4}) average {:.8}", axis.alpha, axis.beta, p_infinity_orbit(&axis, 512)?);
    Ok(())
}
