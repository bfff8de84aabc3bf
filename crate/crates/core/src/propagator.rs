//! Trotterized time evolution of the driven band model.
//!
//! The evolution over one drive period is the ordered product of
//! `steps_per_cycle` short-time propagators, each built from `H` sampled at the
//! step midpoint. Because `H(t)` is periodic and every cycle uses the same
//! grid, the one-cycle product is formed once and then applied cycle after
//! cycle; the sequence of matrices multiplied is identical to stepping through
//! the whole run.
//!
//! Two step kernels are available: the exact SU(2) exponential and a truncated
//! Taylor series of configurable order. Truncation breaks unitarity; the defect
//! is measured and reported, never corrected.

use serde::{Deserialize, Serialize};

use crate::band::{bloch_vector, DriveParams};
use crate::error::{Error, Result};
use crate::su2::{eigensystem2, exact_step, Matrix2, State2, C64, DEGENERACY_TOL};

/// Out-of-range probabilities within this margin are clamped; beyond it they
/// are an error.
pub const PROBABILITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMode {
    Taylor,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrotterConfig {
    pub steps_per_cycle: usize,
    pub taylor_order: u32,
    pub mode: StepMode,
    pub n_cycles: usize,
    /// Fraction of the period at which populations are measured.
    pub measure_offset: f64,
    /// Largest tolerated `max |U†U - I|` in Taylor mode.
    pub unitarity_budget: f64,
}

impl Default for TrotterConfig {
    fn default() -> Self {
        Self {
            steps_per_cycle: 20_000,
            taylor_order: 4,
            mode: StepMode::Exact,
            n_cycles: 100,
            measure_offset: 0.0,
            unitarity_budget: 1e-6,
        }
    }
}

impl TrotterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_cycle < 100 {
            return Err(Error::InvalidParameter(format!(
                "steps_per_cycle = {} must be >= 100",
                self.steps_per_cycle
            )));
        }
        if self.n_cycles < 1 {
            return Err(Error::InvalidParameter("n_cycles must be >= 1".into()));
        }
        if self.mode == StepMode::Taylor && self.taylor_order < 2 {
            return Err(Error::InvalidParameter(format!(
                "taylor_order = {} must be >= 2 (first order never mixes real and imaginary parts)",
                self.taylor_order
            )));
        }
        if !(0.0..1.0).contains(&self.measure_offset) {
            return Err(Error::InvalidParameter(format!(
                "measure_offset = {} must lie in [0, 1)",
                self.measure_offset
            )));
        }
        if !(self.unitarity_budget > 0.0) {
            return Err(Error::InvalidParameter("unitarity_budget must be > 0".into()));
        }
        Ok(())
    }

    pub fn with_mode(self, mode: StepMode) -> Self {
        Self { mode, ..self }
    }

    pub fn with_order(self, taylor_order: u32) -> Self {
        Self { taylor_order, mode: StepMode::Taylor, ..self }
    }

    pub fn with_steps(self, steps_per_cycle: usize) -> Self {
        Self { steps_per_cycle, ..self }
    }

    pub fn with_cycles(self, n_cycles: usize) -> Self {
        Self { n_cycles, ..self }
    }
}

/// Truncated Taylor series `Σ_{m=0}^{order} (-i H dt)^m / m!` with
/// `H = bloch_vector(p, t_j)·σ`.
pub fn trotter_step(p: &DriveParams, t_j: f64, dt: f64, order: u32) -> Matrix2 {
    let h = bloch_vector(p, t_j).hamiltonian();
    taylor_exp(&h, dt, order)
}

pub(crate) fn taylor_exp(h: &Matrix2, dt: f64, order: u32) -> Matrix2 {
    let x = h.scale(C64::new(0.0, -dt));
    let mut term = Matrix2::identity();
    let mut sum = term;
    for m in 1..=order {
        term = (term * x).scale(C64::new(1.0 / m as f64, 0.0));
        sum = sum + term;
    }
    sum
}

#[inline]
fn step(p: &DriveParams, t_mid: f64, dt: f64, mode: StepMode, order: u32) -> Matrix2 {
    match mode {
        StepMode::Exact => exact_step(&bloch_vector(p, t_mid), dt),
        StepMode::Taylor => trotter_step(p, t_mid, dt, order),
    }
}

/// Ordered product of steps `first..last` on the per-cycle grid.
fn step_product(p: &DriveParams, cfg: &TrotterConfig, first: usize, last: usize) -> Matrix2 {
    let dt = p.period() / cfg.steps_per_cycle as f64;
    (first..last).fold(Matrix2::identity(), |acc, j| {
        step(p, (j as f64 + 0.5) * dt, dt, cfg.mode, cfg.taylor_order) * acc
    })
}

/// Propagators split at the measurement point `f·τ`.
struct CyclePieces {
    /// `U(fτ, 0)`.
    lead: Matrix2,
    /// `U(fτ + τ, fτ)`, one full period starting at the measurement point.
    cycle: Matrix2,
    /// Time of the measurement within the period.
    t_measure: f64,
}

fn cycle_pieces(p: &DriveParams, cfg: &TrotterConfig) -> CyclePieces {
    let n = cfg.steps_per_cycle;
    let split = ((cfg.measure_offset * n as f64).round() as usize).min(n);
    let lead = step_product(p, cfg, 0, split);
    let tail = step_product(p, cfg, split, n);
    CyclePieces {
        lead,
        cycle: lead * tail,
        t_measure: p.period() * split as f64 / n as f64,
    }
}

/// One-period propagator `U(τ, 0)` on the configured grid.
pub fn cycle_propagator(p: &DriveParams, cfg: &TrotterConfig) -> Matrix2 {
    step_product(p, cfg, 0, cfg.steps_per_cycle)
}

/// Per-cycle excited-band populations and their running means.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PumpTrace {
    /// `p_j` for cycles `1..=n_cycles`.
    pub p_j: Vec<f64>,
    /// `p_n = (1/n) Σ_{j≤n} p_j`.
    pub p_n: Vec<f64>,
    /// Largest `max |U†U - I|` of the accumulated propagator.
    pub unitarity_defect: f64,
}

impl PumpTrace {
    pub fn final_mean(&self) -> f64 {
        *self.p_n.last().expect("trace holds at least one cycle")
    }
}

pub(crate) fn running_means(p_j: &[f64]) -> Vec<f64> {
    let mut sum = 0.0;
    p_j.iter()
        .enumerate()
        .map(|(i, p)| {
            sum += p;
            sum / (i + 1) as f64
        })
        .collect()
}

/// Unchecked evolution: raw populations, no range or unitarity checks.
fn evolve_raw(p: &DriveParams, cfg: &TrotterConfig, initial: Option<State2>) -> Result<PumpTrace> {
    let start = match initial {
        Some(s) => s,
        None => eigensystem2(&bloch_vector(p, 0.0).hamiltonian())?.n0,
    };
    let pieces = cycle_pieces(p, cfg);
    let basis = eigensystem2(&bloch_vector(p, pieces.t_measure).hamiltonian());
    let basis = match basis {
        Ok(b) => b,
        Err(Error::DegenerateSpectrum { gap }) => {
            return Err(Error::DegenerateMeasurementBasis { cycle: 1, gap })
        }
        Err(e) => return Err(e),
    };
    if basis.gap() < DEGENERACY_TOL {
        return Err(Error::DegenerateMeasurementBasis { cycle: 1, gap: basis.gap() });
    }

    let mut total = pieces.lead;
    let mut defect: f64 = 0.0;
    let mut p_j = Vec::with_capacity(cfg.n_cycles);
    // U((m + f)τ, 0) = (lead · tail)^m · lead
    for _ in 0..cfg.n_cycles {
        total = pieces.cycle * total;
        defect = defect.max(total.unitarity_defect());
        let psi = total.apply(&start);
        p_j.push(basis.n1.inner(&psi).norm_sqr());
    }
    let p_n = running_means(&p_j);
    Ok(PumpTrace { p_j, p_n, unitarity_defect: defect })
}

/// Evolves `initial` (default: ground state of `H(0)`) for `cfg.n_cycles`
/// periods and records the excited-band population at `(m + f)·τ`,
/// `m = 1..=n_cycles`, in the instantaneous eigenbasis.
pub fn evolve(p: &DriveParams, cfg: &TrotterConfig, initial: Option<State2>) -> Result<PumpTrace> {
    p.validate()?;
    cfg.validate()?;
    let initial = initial.map(|s| s.normalized()).transpose()?;
    let mut trace = evolve_raw(p, cfg, initial)?;
    if cfg.mode == StepMode::Taylor && trace.unitarity_defect > cfg.unitarity_budget {
        return Err(Error::NonUnitaryEvolution {
            defect: trace.unitarity_defect,
            budget: cfg.unitarity_budget,
        });
    }
    for (cycle, pj) in trace.p_j.iter_mut().enumerate() {
        if !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(pj) {
            return Err(Error::ProbabilityOutOfRange { cycle: cycle + 1, value: *pj });
        }
        *pj = pj.clamp(0.0, 1.0);
    }
    trace.p_n = running_means(&trace.p_j);
    Ok(trace)
}

/// Population in the excited band after `n_cycles`, averaged over all cycles.
pub fn p_g_numeric(p: &DriveParams, cfg: &TrotterConfig) -> Result<f64> {
    Ok(evolve(p, cfg, None)?.final_mean())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitarityReport {
    /// Accumulated `max |U†U - I|` of the Taylor-mode run.
    pub defect_taylor: f64,
    /// Accumulated defect of the exact-mode run on the same grid.
    pub defect_exact: f64,
    /// `max_n |p_n(taylor) - p_n(exact)|`.
    pub max_dev_vs_exact: f64,
}

/// Runs Taylor (at `cfg.taylor_order`, any order ≥ 1) and exact modes on the
/// same grid and compares them. No budget is enforced here.
pub fn unitarity_report(p: &DriveParams, cfg: &TrotterConfig) -> Result<UnitarityReport> {
    p.validate()?;
    if cfg.taylor_order < 1 {
        return Err(Error::InvalidParameter("taylor_order must be >= 1".into()));
    }
    let check = TrotterConfig { mode: StepMode::Exact, ..*cfg };
    check.validate()?;
    let taylor = evolve_raw(p, &TrotterConfig { mode: StepMode::Taylor, ..*cfg }, None)?;
    let exact = evolve_raw(p, &check, None)?;
    let max_dev = taylor
        .p_n
        .iter()
        .zip(&exact.p_n)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(UnitarityReport {
        defect_taylor: taylor.unitarity_defect,
        defect_exact: exact.unitarity_defect,
        max_dev_vs_exact: max_dev,
    })
}

/// Grid-refinement study: `p_n` at `base_steps · 2^i`, `i = 0..levels`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub steps: Vec<usize>,
    pub p_n: Vec<f64>,
    /// `|p_n(N_i) - p_n(N_{i+1})|`.
    pub diffs: Vec<f64>,
    /// Least-squares slope of `log diff` against `log dt`.
    pub observed_order: f64,
}

/// Halves the step repeatedly and fits the convergence order of the final
/// running mean. Runs are unchecked so coarse Taylor grids can be studied.
pub fn convergence_study(
    p: &DriveParams,
    cfg: &TrotterConfig,
    base_steps: usize,
    levels: usize,
) -> Result<ConvergenceStudy> {
    p.validate()?;
    if levels < 4 {
        return Err(Error::InvalidParameter(
            "convergence study needs at least 4 levels (3 differences)".into(),
        ));
    }
    let steps: Vec<usize> = (0..levels).map(|i| base_steps << i).collect();
    let mut p_n = Vec::with_capacity(levels);
    for &n in &steps {
        let c = TrotterConfig { steps_per_cycle: n, ..*cfg };
        // order 1 is allowed here, as in `unitarity_report`
        TrotterConfig { mode: StepMode::Exact, ..c }.validate()?;
        if c.taylor_order < 1 {
            return Err(Error::InvalidParameter("taylor_order must be >= 1".into()));
        }
        p_n.push(evolve_raw(p, &c, None)?.final_mean());
    }
    let diffs: Vec<f64> = p_n.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    // x = log dt (up to a constant), y = log diff
    let pts: Vec<(f64, f64)> = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| (-(i as f64) * std::f64::consts::LN_2, d.max(f64::MIN_POSITIVE).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    Ok(ConvergenceStudy { steps, p_n, diffs, observed_order: sxy / sxx })
}

/// Starting state `√(1-w)|n0⟩ + √w|n1⟩` in the eigenbasis of `H(0)`.
pub fn weighted_initial_state(p: &DriveParams, excited_weight: f64) -> Result<State2> {
    if !(0.0..=1.0).contains(&excited_weight) {
        return Err(Error::InvalidParameter(format!(
            "excited weight {excited_weight} must lie in [0, 1]"
        )));
    }
    let es = eigensystem2(&bloch_vector(p, 0.0).hamiltonian())?;
    let a = (1.0 - excited_weight).sqrt();
    let b = excited_weight.sqrt();
    State2::new(es.n0.c0 * a + es.n1.c0 * b, es.n0.c1 * a + es.n1.c1 * b).normalized()
}
