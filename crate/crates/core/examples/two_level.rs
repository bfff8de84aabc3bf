//! Two-level basics: eigensystem of `d·σ`, one exact SU(2) step, and the
//! entropy of pure versus mixed states.

use geopump::su2::{eigensystem2, exact_step, von_neumann_entropy, BlochVector, DensityMatrix2};

fn main() -> geopump::Result<()> {
    let d = BlochVector::new(0.0, 0.3, -1.2);
    let es = eigensystem2(&d.hamiltonian())?;
    println!("gap 2|d| = {:.6} (eigensystem says {:.6})", d.gap(), es.gap());

    let u = exact_step(&d, 0.1);
    println!("exp(-i d·σ dt): unitarity defect {:.1e}", u.unitarity_defect());

    let psi = u.apply(&es.n0);
    println!("ground state after one step keeps |<n0|ψ>|² = {:.12}", es.n0.inner(&psi).norm_sqr());

    let pure = DensityMatrix2::pure(&psi)?;
    let mixed = DensityMatrix2::uniform_mixture(&[es.n0, es.n1])?;
    println!("S(pure) = {:.3e}, S(½ n0 + ½ n1) = {:.6} = ln 2", von_neumann_entropy(&pure), von_neumann_entropy(&mixed));
    Ok(())
}
