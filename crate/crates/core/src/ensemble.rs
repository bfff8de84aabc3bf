//! Time-dependent ensemble of identical systems started at staggered times.
//!
//! Each member traverses one gap-closing per cycle, at the maximum of the
//! drive, `t_m = (m + ¼)·τ`. Between those instants its state is frozen at
//! `𝒰^{n(t)}|n0⟩`. Member `j` starts `j·Δt` later than member 0, so
//! `p_j(t) = p_1(t - jΔt)` and the ensemble population is their mean.

use serde::{Deserialize, Serialize};

use crate::band::DEFAULT_TAU_CYCLE_PS;
use crate::cyclemap::{cycle_unitary, CycleParams};
use crate::error::{Error, Result};
use crate::su2::{von_neumann_entropy, DensityMatrix2, Matrix2, State2};

/// Phase of the drive period at which the gap-closing happens.
pub const TPT_PHASE: f64 = 0.25;

/// Slack (in cycles) so instants that land on a TPT up to rounding count as
/// passed.
const INSTANT_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub n_systems: usize,
    /// Start-time stagger Δt between consecutive members (ps).
    pub dt_mismatch: f64,
    /// Period between gap closings (ps).
    pub tau_cycle: f64,
    /// End of the sampled window (ps).
    pub t_max: f64,
    /// Sampling step of the output grid (ps).
    pub time_step: f64,
    /// Start time of member 0 (ps).
    pub start_delay: f64,
    pub cycle: CycleParams,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            n_systems: 60,
            dt_mismatch: 0.1,
            tau_cycle: DEFAULT_TAU_CYCLE_PS,
            t_max: 15.0,
            time_step: DEFAULT_TAU_CYCLE_PS / 100.0,
            start_delay: 0.0,
            cycle: CycleParams::default(),
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.n_systems == 0 {
            return bad("n_systems must be >= 1");
        }
        if !(self.tau_cycle > 0.0 && self.tau_cycle.is_finite()) {
            return bad("tau_cycle must be positive");
        }
        if !(self.dt_mismatch > 0.0 && self.dt_mismatch < self.tau_cycle) {
            return bad("dt_mismatch must lie in (0, tau_cycle)");
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad("t_max must be positive");
        }
        if !(self.time_step > 0.0 && self.time_step <= self.t_max) {
            return bad("time_step must lie in (0, t_max]");
        }
        if !(self.start_delay >= 0.0 && self.start_delay.is_finite()) {
            return bad("start_delay must be >= 0");
        }
        self.cycle.validate()
    }

    /// `n·Δt`, the window over which members join.
    pub fn ramp_in(&self) -> f64 {
        self.start_delay + self.n_systems as f64 * self.dt_mismatch
    }

    /// Sample times `0, h, 2h, … ≤ t_max`.
    pub fn times(&self) -> Vec<f64> {
        let n = (self.t_max / self.time_step + 1e-9).floor() as usize;
        (0..=n).map(|i| i as f64 * self.time_step).collect()
    }

    fn member_start(&self, j: usize) -> f64 {
        self.start_delay + j as f64 * self.dt_mismatch
    }
}

/// Number of gap closings passed by a system that started at time 0.
pub fn tpt_count(tau_cycle: f64, t: f64) -> u64 {
    let x = t / tau_cycle - TPT_PHASE + INSTANT_SLACK;
    if x < 0.0 {
        0
    } else {
        x.floor() as u64 + 1
    }
}

/// Excited population of a single system `t` after it started; 0 before the
/// start and before the first gap closing.
pub fn p1_staircase(c: &CycleParams, tau_cycle: f64, t: f64) -> f64 {
    let n = tpt_count(tau_cycle, t);
    if n == 0 {
        return 0.0;
    }
    cycle_unitary(c).pow(n).apply(&State2::up()).c1.norm_sqr()
}

/// Caches `𝒰^n |n0⟩` for the counts reachable within the window.
struct StateTable {
    states: Vec<State2>,
}

impl StateTable {
    fn new(cfg: &EnsembleConfig) -> Self {
        let u: Matrix2 = cycle_unitary(&cfg.cycle);
        let n_max = tpt_count(cfg.tau_cycle, cfg.t_max) as usize;
        let mut states = Vec::with_capacity(n_max + 1);
        let mut psi = State2::up();
        states.push(psi);
        for _ in 0..n_max {
            psi = u.apply(&psi);
            states.push(psi);
        }
        Self { states }
    }

    fn at(&self, cfg: &EnsembleConfig, j: usize, t: f64) -> State2 {
        let local = t - cfg.member_start(j);
        let n = if local < 0.0 { 0 } else { tpt_count(cfg.tau_cycle, local) };
        self.states[n as usize]
    }
}

/// Member states `|φ_j(t)⟩`, `j = 0..n_systems`.
pub fn member_states(cfg: &EnsembleConfig, t: f64) -> Result<Vec<State2>> {
    cfg.validate()?;
    let table = StateTable::new(&EnsembleConfig { t_max: cfg.t_max.max(t), ..*cfg });
    Ok((0..cfg.n_systems).map(|j| table.at(cfg, j, t)).collect())
}

/// Ensemble density matrix `(1/n) Σ_j |φ_j(t)⟩⟨φ_j(t)|`.
pub fn density_at(cfg: &EnsembleConfig, t: f64) -> Result<DensityMatrix2> {
    DensityMatrix2::uniform_mixture(&member_states(cfg, t)?)
}

/// `tr(diag(0, 1) ρ)`, the excited-level population.
pub fn observable_from_density(rho: &DensityMatrix2) -> f64 {
    rho.matrix().m[1][1].re
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleTrace {
    pub times: Vec<f64>,
    /// Mean of the members' staircases.
    pub p_ens: Vec<f64>,
    /// Entropy of the ensemble density matrix.
    pub entropy: Vec<f64>,
    /// Staircase of member 0.
    pub p_first: Vec<f64>,
}

/// Extremes and mean of a trace after `t_from`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlateauStats {
    pub p_min: f64,
    pub p_max: f64,
    pub p_mean: f64,
    pub s_min: f64,
    pub s_max: f64,
}

impl EnsembleTrace {
    pub fn plateau(&self, t_from: f64) -> Option<PlateauStats> {
        let idx: Vec<usize> = (0..self.times.len()).filter(|&i| self.times[i] >= t_from).collect();
        if idx.is_empty() {
            return None;
        }
        let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| idx.iter().map(|&i| v[i]).fold(init, f);
        Some(PlateauStats {
            p_min: fold(&self.p_ens, f64::min, f64::INFINITY),
            p_max: fold(&self.p_ens, f64::max, f64::NEG_INFINITY),
            p_mean: idx.iter().map(|&i| self.p_ens[i]).sum::<f64>() / idx.len() as f64,
            s_min: fold(&self.entropy, f64::min, f64::INFINITY),
            s_max: fold(&self.entropy, f64::max, f64::NEG_INFINITY),
        })
    }
}

/// Samples the ensemble on `cfg.times()`.
pub fn ensemble_average(cfg: &EnsembleConfig) -> Result<EnsembleTrace> {
    cfg.validate()?;
    let table = StateTable::new(cfg);
    let times = cfg.times();
    let n = cfg.n_systems as f64;
    let mut p_ens = Vec::with_capacity(times.len());
    let mut entropy = Vec::with_capacity(times.len());
    let mut p_first = Vec::with_capacity(times.len());
    let mut states = Vec::with_capacity(cfg.n_systems);
    for &t in &times {
        states.clear();
        states.extend((0..cfg.n_systems).map(|j| table.at(cfg, j, t)));
        p_ens.push(states.iter().map(|s| s.c1.norm_sqr()).sum::<f64>() / n);
        entropy.push(von_neumann_entropy(&DensityMatrix2::uniform_mixture(&states)?));
        p_first.push(table.at(cfg, 0, t).c1.norm_sqr());
    }
    Ok(EnsembleTrace { times, p_ens, entropy, p_first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn staircase_examples() {
        let c = CycleParams::default();
        let tau = 0.83;
        assert_eq!(p1_staircase(&c, tau, 0.0), 0.0);
        assert_eq!(p1_staircase(&c, tau, 0.2 * tau), 0.0);
        assert_eq!(p1_staircase(&c, tau, -1.0), 0.0);
        assert!((p1_staircase(&c, tau, 0.5 * tau) - 1.0).abs() < 1e-15);
        for m in 0..8 {
            let t = (m as f64 + 0.5) * tau;
            let want = if m % 2 == 0 { 1.0 } else { 0.0 };
            assert!((p1_staircase(&c, tau, t) - want).abs() < 1e-15, "m={m}");
        }
        // constant between closings
        let a = p1_staircase(&c, tau, 1.26 * tau);
        let b = p1_staircase(&c, tau, 2.24 * tau);
        assert_eq!(a, b);
    }

    #[test]
    fn single_member_is_staircase() {
        let cfg = EnsembleConfig { n_systems: 1, t_max: 5.0, ..Default::default() };
        let tr = ensemble_average(&cfg).unwrap();
        for (i, &t) in tr.times.iter().enumerate() {
            assert!((tr.p_ens[i] - p1_staircase(&cfg.cycle, cfg.tau_cycle, t)).abs() < 1e-14);
            assert_eq!(tr.p_ens[i], tr.p_first[i]);
            assert!(tr.entropy[i].abs() < 1e-12);
        }
    }

    #[test]
    fn density_route_matches_population_route() {
        let cfg = EnsembleConfig {
            cycle: CycleParams { theta: 1.9, phi: 0.7, omega_az: 0.3 },
            t_max: 8.0,
            ..Default::default()
        };
        let tr = ensemble_average(&cfg).unwrap();
        for i in (0..tr.times.len()).step_by(37) {
            let rho = density_at(&cfg, tr.times[i]).unwrap();
            assert!((observable_from_density(&rho) - tr.p_ens[i]).abs() < 1e-12);
            assert!((von_neumann_entropy(&rho) - tr.entropy[i]).abs() < 1e-12);
            for s in member_states(&cfg, tr.times[i]).unwrap() {
                assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
                let pure = DensityMatrix2::pure(&s).unwrap();
                assert!(von_neumann_entropy(&pure).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn observable_examples() {
        let ground = DensityMatrix2::pure(&State2::up()).unwrap();
        assert_eq!(observable_from_density(&ground), 0.0);
        assert_eq!(observable_from_density(&DensityMatrix2::maximally_mixed()), 0.5);
    }

    #[test]
    fn shift_covariance() {
        let base = EnsembleConfig { n_systems: 12, t_max: 6.0, ..Default::default() };
        let shift_steps = 40;
        let delta = shift_steps as f64 * base.time_step;
        let moved = EnsembleConfig { start_delay: delta, t_max: base.t_max + delta, ..base };
        let a = ensemble_average(&base).unwrap();
        let b = ensemble_average(&moved).unwrap();
        for i in 0..a.times.len() {
            assert_eq!(a.p_ens[i], b.p_ens[i + shift_steps], "i={i}");
            assert_eq!(a.entropy[i], b.entropy[i + shift_steps]);
        }
    }

    #[test]
    fn aligned_square_wave_average_is_half() {
        // n·Δt a multiple of 2τ: members fill both halves of the square wave
        // equally once all have joined.
        let cfg = EnsembleConfig {
            n_systems: 20,
            dt_mismatch: 0.083,
            tau_cycle: 0.83,
            t_max: 8.0,
            ..Default::default()
        };
        let tr = ensemble_average(&cfg).unwrap();
        let st = tr.plateau(cfg.ramp_in() + cfg.tau_cycle).unwrap();
        assert!((st.p_min - 0.5).abs() < 1e-12 && (st.p_max - 0.5).abs() < 1e-12, "{st:?}");
        assert!((st.s_min - LN_2).abs() < 1e-12);
    }

    #[test]
    fn entropy_bounded() {
        let cfg = EnsembleConfig { cycle: CycleParams { theta: 2.0, phi: 1.0, omega_az: 0.0 }, ..Default::default() };
        let tr = ensemble_average(&cfg).unwrap();
        assert!(tr.entropy.iter().all(|&s| (-1e-12..=LN_2 + 1e-12).contains(&s)));
        assert!(tr.p_ens.iter().all(|&p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn zero_theta_never_pumps() {
        let cfg = EnsembleConfig { cycle: CycleParams { theta: 0.0, phi: 0.4, omega_az: 0.0 }, ..Default::default() };
        let tr = ensemble_average(&cfg).unwrap();
        assert!(tr.p_ens.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn config_validation() {
        let ok = EnsembleConfig::default();
        assert!(ok.validate().is_ok());
        assert!(EnsembleConfig { n_systems: 0, ..ok }.validate().is_err());
        assert!(EnsembleConfig { dt_mismatch: 1.0, ..ok }.validate().is_err());
        assert!(EnsembleConfig { time_step: 0.0, ..ok }.validate().is_err());
        let bad_theta = CycleParams { theta: 2.0 * PI, ..ok.cycle };
        assert!(EnsembleConfig { cycle: bad_theta, ..ok }.validate().is_err());
    }
}
