//! Phonon-driven two-band lattice model.
//!
//! At fixed crystal momentum `k` the Hamiltonian is `H(t) = d(t)·σ` with
//!
//! ```text
//! d1 = 0
//! d2 = sin k
//! d3 = -(ε₀ + A_ph·sin(ωt) + cos k)
//! ```
//!
//! Energies are in model units where the hopping is 1, with `ħ = 1`. The
//! conversion to physical units lives in [`ModelUnits`].

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2::BlochVector;

/// `ħ` in meV·ps.
pub const HBAR_MEV_PS: f64 = 0.658_211_956_9;

/// Default drive period in ps (A1g phonon).
pub const DEFAULT_TAU_CYCLE_PS: f64 = 0.83;

/// Number of k points used for winding integrals.
pub const WINDING_GRID: usize = 4096;

/// `min_k |d|` below this means the loop passes through the origin.
pub const LOOP_CLOSURE_TOL: f64 = 1e-9;

/// Conversion between model units and meV / ps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelUnits {
    /// meV per model energy unit.
    pub mev_per_energy_unit: f64,
}

impl Default for ModelUnits {
    fn default() -> Self {
        Self { mev_per_energy_unit: 1000.0 }
    }
}

impl ModelUnits {
    /// Length of one model time unit, `ħ / E_unit`, in ps.
    pub fn time_unit_ps(&self) -> f64 {
        HBAR_MEV_PS / self.mev_per_energy_unit
    }

    /// Angular frequency (model units) whose period is `period_ps`.
    pub fn omega_for_period(&self, period_ps: f64) -> f64 {
        TAU * self.time_unit_ps() / period_ps
    }

    pub fn energy_to_mev(&self, e: f64) -> f64 {
        e * self.mev_per_energy_unit
    }
}

/// Drive frequency giving a 0.83 ps cycle with 1 energy unit = 1 eV.
///
/// ħω ≈ 5 meV against a cycle-averaged gap of ~0.1 unit near `k = 0`, so the
/// drive is deep in the `ħω ≪ Δ̄` regime and the max-p_G step sits close to
/// the static threshold `ε₀ = -1 + A_ph`.
pub fn default_omega() -> f64 {
    ModelUnits::default().omega_for_period(DEFAULT_TAU_CYCLE_PS)
}

/// Band-model knobs at one crystal momentum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveParams {
    /// Crystal momentum in radians.
    pub k: f64,
    /// Static offset ε₀.
    pub eps0: f64,
    /// Phonon amplitude A_ph ≥ 0.
    pub a_ph: f64,
    /// Drive angular frequency ω > 0.
    pub omega: f64,
}

impl Default for DriveParams {
    fn default() -> Self {
        Self { k: 0.0, eps0: -0.95, a_ph: 0.1, omega: default_omega() }
    }
}

impl DriveParams {
    pub fn new(k: f64, eps0: f64, a_ph: f64, omega: f64) -> Result<Self> {
        let p = Self { k, eps0, a_ph, omega };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.k, self.eps0, self.a_ph, self.omega].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("drive parameters must be finite".into()));
        }
        if self.a_ph < 0.0 {
            return Err(Error::InvalidParameter(format!("a_ph = {} must be >= 0", self.a_ph)));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega = {} must be > 0", self.omega)));
        }
        Ok(())
    }

    pub fn with_k(self, k: f64) -> Self {
        Self { k, ..self }
    }

    pub fn with_eps0(self, eps0: f64) -> Self {
        Self { eps0, ..self }
    }

    pub fn with_amplitude(self, a_ph: f64) -> Self {
        Self { a_ph, ..self }
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Same parameters with the phonon switched off.
    pub fn pristine(&self) -> Self {
        Self { a_ph: 0.0, ..*self }
    }
}

/// Bloch vector of the driven Hamiltonian at time `t`.
#[inline]
pub fn bloch_vector(p: &DriveParams, t: f64) -> BlochVector {
    let (sk, ck) = p.k.sin_cos();
    BlochVector::new(0.0, sk, -(p.eps0 + p.a_ph * (p.omega * t).sin() + ck))
}

/// Instantaneous gap `2|d(t)|`.
pub fn gap(p: &DriveParams, t: f64) -> f64 {
    bloch_vector(p, t).gap()
}

/// Gap statistics over one drive cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapStats {
    pub delta_int: f64,
    pub delta_min: f64,
    pub delta_avg: f64,
    /// `ħω / Δ̄`; infinite when the average gap vanishes.
    pub energy_ratio: f64,
}

/// Pristine, minimum and average gap over one cycle.
///
/// `delta_avg` is the midpoint-sampled mean of `2|d(t)|`. `delta_min` is the
/// exact minimum: `d3` is affine in `s = sin(ωt)`, which covers `[-1, 1]`
/// every cycle, so the minimum does not depend on where the samples fall.
pub fn gap_stats(p: &DriveParams, samples_per_cycle: usize) -> Result<GapStats> {
    p.validate()?;
    if samples_per_cycle < 16 {
        return Err(Error::InvalidParameter(format!(
            "samples_per_cycle = {samples_per_cycle} must be >= 16"
        )));
    }
    let tau = p.period();
    let h = tau / samples_per_cycle as f64;
    let (sum, sampled_min) = (0..samples_per_cycle)
        .map(|i| gap(p, (i as f64 + 0.5) * h))
        .fold((0.0, f64::INFINITY), |(s, m), g| (s + g, m.min(g)));
    let delta_avg = sum / samples_per_cycle as f64;

    let (sk, ck) = p.k.sin_cos();
    let offset = p.eps0 + ck;
    let closest = (offset.abs() - p.a_ph).max(0.0);
    let delta_min = (2.0 * (sk * sk + closest * closest).sqrt()).min(sampled_min);
    let delta_int = gap(&p.pristine(), 0.0);

    Ok(GapStats {
        delta_int,
        delta_min,
        delta_avg,
        energy_ratio: p.omega / delta_avg,
    })
}

/// Winding number of the planar loop `(sin k, -(eps_eff + cos k))` around
/// the origin as `k` runs over the Brillouin zone.
///
/// The polar angle is accumulated step by step with each increment wrapped
/// into `(-π, π]`.
pub fn winding_number(eps_eff: f64) -> Result<i32> {
    winding_number_on_grid(eps_eff, WINDING_GRID)
}

pub(crate) fn winding_number_on_grid(eps_eff: f64, n: usize) -> Result<i32> {
    let point = |i: usize| {
        let k = TAU * i as f64 / n as f64;
        let (s, c) = k.sin_cos();
        (s, -(eps_eff + c))
    };
    let mut min_norm = f64::INFINITY;
    let mut total = 0.0;
    let (mut x0, mut y0) = point(0);
    for i in 1..=n {
        let (x1, y1) = point(i % n);
        min_norm = min_norm.min(x1.hypot(y1));
        let mut dtheta = y1.atan2(x1) - y0.atan2(x0);
        if dtheta > PI {
            dtheta -= TAU;
        } else if dtheta <= -PI {
            dtheta += TAU;
        }
        total += dtheta;
        (x0, y0) = (x1, y1);
    }
    if min_norm < LOOP_CLOSURE_TOL {
        return Err(Error::GapClosedOnLoop { min_norm });
    }
    Ok((total / TAU).round() as i32)
}

/// Winding number and whether it changes during a drive cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TopologicalIndex {
    /// Winding of the pristine loop, or of the `sin(ωt) = +1` loop when the
    /// pristine loop is gapless.
    pub nu: i32,
    /// 1 iff the winding differs between two instants of the cycle.
    pub delta_nu: i32,
}

/// Detects a topological transition inside one drive cycle.
///
/// `eps_eff(t) = ε₀ + A_ph·sin(ωt)` is monotone between the two extremes of
/// `sin`, so comparing the winding at `ε₀ ± A_ph` is enough. A loop that only
/// touches the origin at one extreme is a gap closing without inversion and
/// yields `delta_nu = 0`.
pub fn tpt_in_cycle(p: &DriveParams) -> Result<TopologicalIndex> {
    p.validate()?;
    tpt_from_samples(p, &[1.0, -1.0])
}

/// Same detection from an arbitrary set of `sin(ωt)` samples.
pub(crate) fn tpt_from_samples(p: &DriveParams, sines: &[f64]) -> Result<TopologicalIndex> {
    let windings: Vec<Result<i32>> = sines
        .iter()
        .map(|s| winding_number(p.eps0 + p.a_ph * s))
        .collect();
    let defined: Vec<i32> = windings.iter().filter_map(|w| w.as_ref().ok().copied()).collect();
    let Some(&first) = defined.first() else {
        // gap closed at every sampled instant
        return Err(windings.into_iter().find_map(|w| w.err()).unwrap_or(
            Error::GapClosedOnLoop { min_norm: 0.0 },
        ));
    };
    let delta_nu = i32::from(defined.iter().any(|&w| w != first));
    let nu = winding_number(p.eps0).unwrap_or(first);
    Ok(TopologicalIndex { nu, delta_nu })
}
