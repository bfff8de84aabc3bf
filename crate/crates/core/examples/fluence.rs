//! Pump-fluence dependence: fluence shifts the chemical potential down, which
//! helps the golden-rule channel and, once μ < 0, hurts the geometric one.

use geopump::thermo::{fluence_sweep, ThermalModel};

fn main() -> geopump::Result<()> {
    let m = ThermalModel::default();
    let f: Vec<f64> = (0..=30).step_by(3).map(f64::from).collect();
    for t in [20.0, 100.0] {
        let c = fluence_sweep(&m, t, &f)?;
        println!("T = {t} K");
        for i in 0..f.len() {
            println!("  F = {:>4}  mu = {:>7.2}  q_gp = {:.5}  q_fgr = {:.5}", f[i], c.mu[i], c.q_gp[i], c.q_fgr[i]);
        }
    }
    Ok(())
}
