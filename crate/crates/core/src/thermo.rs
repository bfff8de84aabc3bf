//! Finite-temperature weights for band-to-band pumping.
//!
//! Energetic (golden-rule) transitions are weighted by `f_v - f_c`; geometric
//! pumping by `g = f_v + f_c - 2 f_v f_c`, which stays positive when the two
//! bands touch. A coarse linear model of `Δ(T)` and `μ(T)` turns these into
//! temperature and fluence curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant in meV/K.
pub const KB_MEV_PER_K: f64 = 0.08617;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermalModel {
    /// Gap at `T = 0` (meV).
    pub gap0: f64,
    /// Temperature where the gap closes (K).
    pub t_berry: f64,
    /// Temperature where `μ` crosses zero (K).
    pub t_lif: f64,
    /// Chemical potential at `T = 0` (meV), measured from midgap.
    pub mu0: f64,
    /// `dμ/dF` in meV per μJ/cm²; the pulse lowers `μ`.
    pub fluence_slope: f64,
}

impl Default for ThermalModel {
    fn default() -> Self {
        Self { gap0: 40.0, t_berry: 160.0, t_lif: 50.0, mu0: 10.0, fluence_slope: 0.5 }
    }
}

impl ThermalModel {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if !(self.gap0 > 0.0 && self.gap0.is_finite()) {
            return bad("gap0 must be positive");
        }
        if !(self.t_lif > 0.0 && self.t_berry > self.t_lif && self.t_berry.is_finite()) {
            return bad("need 0 < t_lif < t_berry");
        }
        if !self.mu0.is_finite() || !self.fluence_slope.is_finite() {
            return bad("mu0 and fluence_slope must be finite");
        }
        Ok(())
    }

    /// `Δ(T) = gap0 · max(0, 1 - T/t_berry)`.
    pub fn gap(&self, t: f64) -> f64 {
        self.gap0 * (1.0 - t / self.t_berry).max(0.0)
    }

    /// `μ(T) = mu0 · (1 - T/t_lif)`.
    pub fn mu(&self, t: f64) -> f64 {
        self.mu0 * (1.0 - t / self.t_lif)
    }

    /// Fermi factors `(f_v, f_c)` at the band edges `∓Δ(T)/2`.
    pub fn occupancies(&self, t: f64, mu: f64) -> (f64, f64) {
        let half = 0.5 * self.gap(t);
        (fermi(-half, mu, t), fermi(half, mu, t))
    }
}

/// Fermi-Dirac occupation; a step (½ at `E = μ`) at `T = 0`.
pub fn fermi(e: f64, mu: f64, t: f64) -> f64 {
    let de = e - mu;
    if t <= 0.0 {
        return if de < 0.0 {
            1.0
        } else if de > 0.0 {
            0.0
        } else {
            0.5
        };
    }
    let x = de / (KB_MEV_PER_K * t);
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Golden-rule occupancy factor `f_v - f_c`.
pub fn fgr_factor(f_v: f64, f_c: f64) -> f64 {
    f_v - f_c
}

/// Geometric-rule factor `f_v + f_c - 2 f_v f_c`.
pub fn geometric_factor(f_v: f64, f_c: f64) -> f64 {
    f_v + f_c - 2.0 * f_v * f_c
}

/// `g · p_G(Δν)` with `p_G(1) = ½`, `p_G(0) = 0`.
pub fn gp_probability(f_v: f64, f_c: f64, delta_nu: i32) -> Result<f64> {
    let p = match delta_nu {
        0 => 0.0,
        1 => 0.5,
        _ => return Err(Error::InvalidParameter(format!("delta_nu = {delta_nu} must be 0 or 1"))),
    };
    Ok(geometric_factor(f_v, f_c) * p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PumpCurve {
    /// T in K, or fluence in μJ/cm².
    pub abscissa: Vec<f64>,
    pub q_gp: Vec<f64>,
    pub q_fgr: Vec<f64>,
    /// Effective chemical potential at each point (meV).
    pub mu: Vec<f64>,
    /// Gap at each point (meV).
    pub gap: Vec<f64>,
}

/// Δν along the sweeps: the drive closes the gap every cycle.
const SWEEP_DELTA_NU: i32 = 1;

pub fn temperature_sweep(model: &ThermalModel, temps: &[f64]) -> Result<PumpCurve> {
    model.validate()?;
    if let Some(t) = temps.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter(format!("temperature {t} must be >= 0")));
    }
    let mut out = PumpCurve {
        abscissa: temps.to_vec(),
        q_gp: Vec::with_capacity(temps.len()),
        q_fgr: Vec::with_capacity(temps.len()),
        mu: Vec::with_capacity(temps.len()),
        gap: Vec::with_capacity(temps.len()),
    };
    for &t in temps {
        let mu = model.mu(t);
        let (f_v, f_c) = model.occupancies(t, mu);
        out.q_gp.push(gp_probability(f_v, f_c, SWEEP_DELTA_NU)?);
        out.q_fgr.push(fgr_factor(f_v, f_c));
        out.mu.push(mu);
        out.gap.push(model.gap(t));
    }
    Ok(out)
}

/// Fluence sweep at fixed `T`: `μ_eff = μ(T) - slope·F`; the golden-rule
/// curve also carries a linear fluence factor `F / F_max`.
pub fn fluence_sweep(model: &ThermalModel, t: f64, fluences: &[f64]) -> Result<PumpCurve> {
    model.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("temperature {t} must be >= 0")));
    }
    if let Some(f) = fluences.iter().find(|f| !(**f >= 0.0 && f.is_finite())) {
        return Err(Error::InvalidParameter(format!("fluence {f} must be >= 0")));
    }
    let f_max = fluences.iter().cloned().fold(0.0, f64::max);
    let mut out = PumpCurve {
        abscissa: fluences.to_vec(),
        q_gp: Vec::with_capacity(fluences.len()),
        q_fgr: Vec::with_capacity(fluences.len()),
        mu: Vec::with_capacity(fluences.len()),
        gap: Vec::with_capacity(fluences.len()),
    };
    for &f in fluences {
        let mu = model.mu(t) - model.fluence_slope * f;
        let (f_v, f_c) = model.occupancies(t, mu);
        let scale = if f_max > 0.0 { f / f_max } else { 0.0 };
        out.q_gp.push(gp_probability(f_v, f_c, SWEEP_DELTA_NU)?);
        out.q_fgr.push(fgr_factor(f_v, f_c) * scale);
        out.mu.push(mu);
        out.gap.push(model.gap(t));
    }
    Ok(out)
}
