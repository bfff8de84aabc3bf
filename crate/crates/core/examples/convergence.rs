//! Taylor-mode fidelity against exact SU(2) steps, and the observed order of
//! the Trotter product under step halving.

use geopump::band::DriveParams;
use geopump::propagator::{convergence_study, unitarity_report, TrotterConfig};

fn main() -> geopump::Result<()> {
    let p = DriveParams::default().with_k(0.005);
    for order in 1..=4 {
        let r = unitarity_report(&p, &TrotterConfig::default().with_order(order))?;
        println!("taylor order {order}: defect {:.2e}, max |Δp_n| vs exact {:.2e}", r.defect_taylor, r.max_dev_vs_exact);
    }
    for (label, cfg) in [
        ("taylor 2", TrotterConfig::default().with_order(2)),
        ("exact", TrotterConfig::default()),
    ] {
        let s = convergence_study(&p, &cfg, 5000, 5)?;
        println!("{label}: steps {:?}", s.steps);
        println!("  diffs {:?}\n  observed order {:.3}", s.diffs.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>(), s.observed_order);
    }
    Ok(())
}
