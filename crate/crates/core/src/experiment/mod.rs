//! Named sweeps behind the `geopump` binary.
//!
//! Each experiment resolves a [`RunConfig`], validates everything it will
//! touch, evaluates its grid on a worker pool (results keep grid order) and
//! returns a [`ResultTable`].

pub mod config;
pub mod table;

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

pub use config::{apply_override, Axis, Experiment, RunConfig};
pub use table::{emit, parse, Format, ResultTable};

use crate::band::{gap_stats, DriveParams};
use crate::cyclemap::{p_g_closed, p_series_mean, CycleParams};
use crate::ensemble::ensemble_average;
use crate::propagator::{
    convergence_study, evolve, p_g_numeric, unitarity_report, weighted_initial_state, StepMode, TrotterConfig,
};
use crate::thermo::{fluence_sweep, temperature_sweep, PumpCurve};

/// Time samples per cycle for the gap statistics columns.
const GAP_SAMPLES: usize = 1024;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("compute error at {point}: {message}")]
    Compute { point: String, message: String },
    #[error("i/o error: {message}")]
    Io { message: String },
}

impl RunError {
    pub fn config(path: &str, message: &str) -> Self {
        Self::Config { path: path.to_string(), message: message.to_string() }
    }

    pub fn compute(point: String, message: impl std::fmt::Display) -> Self {
        Self::Compute { point, message: message.to_string() }
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        Self::Io { message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            Self::Compute { .. } => 3,
            Self::Io { .. } => 4,
        }
    }
}

/// Evaluates `f` over `points` in parallel; output keeps input order and the
/// reported error is the one at the lowest index.
fn par_map<T, R, F>(points: &[T], f: F) -> Result<Vec<R>, RunError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, RunError> + Sync + Send,
{
    let out: Vec<Result<R, RunError>> = points.par_iter().map(f).collect();
    out.into_iter().collect()
}

fn metadata(cfg: &RunConfig, exp: Experiment) -> serde_json::Value {
    let mut resolved = cfg.clone();
    resolved.experiment = Some(exp);
    resolved.drive.omega = Some(cfg.drive_params().omega);
    json!({
        "generator": concat!("geopump ", env!("CARGO_PKG_VERSION")),
        "config": resolved,
    })
}

/// Runs `exp` with `workers` threads (default: available parallelism).
pub fn run(cfg: &RunConfig, exp: Experiment, workers: Option<usize>) -> Result<ResultTable, RunError> {
    if let Some(declared) = cfg.experiment {
        if declared != exp {
            return Err(RunError::config(
                "experiment",
                &format!("config declares `{}` but `{}` was requested", declared.name(), exp.name()),
            ));
        }
    }
    cfg.validate(exp)?;
    if workers == Some(0) {
        return Err(RunError::config("workers", "must be >= 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| RunError::config("workers", &e.to_string()))?;
    log::info!("running {} on {} worker(s)", exp.name(), pool.current_num_threads());
    let table = pool.install(|| dispatch(cfg, exp))?;
    table.validate()?;
    log::info!("{} rows", table.rows.len());
    Ok(table)
}

fn dispatch(cfg: &RunConfig, exp: Experiment) -> Result<ResultTable, RunError> {
    let meta = metadata(cfg, exp);
    match exp {
        Experiment::SweepK => sweep_k(cfg, meta),
        Experiment::SweepEps0 => sweep_eps0(cfg, meta),
        Experiment::SweepAmplitude => sweep_amplitude(cfg, meta),
        Experiment::InitialStates => initial_states(cfg, meta),
        Experiment::Ensemble => ensemble(cfg, meta),
        Experiment::VerifyCyclemap => verify_cyclemap(cfg, meta),
        Experiment::Thermal => {
            let c = temperature_sweep(&cfg.thermal, &cfg.grids.temperature.values())
                .map_err(|e| RunError::compute("temperature sweep".into(), e))?;
            Ok(curve_table("temperature", &c, meta))
        }
        Experiment::Fluence => {
            let t = cfg.fluence.temperature;
            let c = fluence_sweep(&cfg.thermal, t, &cfg.grids.fluence.values())
                .map_err(|e| RunError::compute(format!("fluence sweep at T = {t}"), e))?;
            Ok(curve_table("fluence", &c, meta))
        }
        Experiment::UnitarityReport => unitarity(cfg, meta),
    }
}

fn pump(p: &DriveParams, trotter: &TrotterConfig) -> Result<f64, RunError> {
    p_g_numeric(p, trotter)
        .map_err(|e| RunError::compute(format!("k = {}, eps0 = {}, a_ph = {}", p.k, p.eps0, p.a_ph), e))
}

fn sweep_k(cfg: &RunConfig, meta: serde_json::Value) -> Result<ResultTable, RunError> {
    let base = cfg.drive_params();
    let ks = cfg.grids.k.values();
    let rows = par_map(&ks, |&k| {
        let p = base.with_k(k);
        let pg = pump(&p, &cfg.trotter)?;
        let g = gap_stats(&p, GAP_SAMPLES).map_err(|e| RunError::compute(format!("k = {k}"), e))?;
        Ok(vec![k, pg, g.delta_int, g.delta_min, g.delta_avg])
    })?;
    let mut t = ResultTable::new(&["k", "p_g", "delta_int", "delta_min", "delta_avg"], meta);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// `(max_k p_G, argmax k)` over the peak grid.
fn peak_over_k(values: &[f64], ks: &[f64]) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for (&v, &k) in values.iter().zip(ks) {
        if v > best.0 {
            best = (v, k);
        }
    }
    best
}

fn sweep_eps0(cfg: &RunConfig, meta: serde_json::Value) -> Result<ResultTable, RunError> {
    let base = cfg.drive_params();
    let eps = cfg.grids.eps0.values();
    let ks = cfg.grids.k_peak.values();
    let pairs: Vec<(f64, f64)> = eps.iter().flat_map(|&e| ks.iter().map(move |&k| (e, k))).collect();
    let pg = par_map(&pairs, |&(e, k)| pump(&base.with_eps0(e).with_k(k), &cfg.trotter))?;
    let mut t = ResultTable::new(&["eps0", "max_p_g", "k_at_max", "delta_min_k0"], meta);
    for (i, &e) in eps.iter().enumerate() {
        let (m, k) = peak_over_k(&pg[i * ks.len()..(i + 1) * ks.len()], &ks);
        let g = gap_stats(&base.with_eps0(e).with_k(0.0), GAP_SAMPLES)
            .map_err(|err| RunError::compute(format!("eps0 = {e}"), err))?;
        t.push(vec![e, m, k, g.delta_min]);
    }
    Ok(t)
}

fn sweep_amplitude(cfg: &RunConfig, meta: serde_json::Value) -> Result<ResultTable, RunError> {
    let base = cfg.drive_params();
    let amps = cfg.grids.a_ph.values();
    let ks = cfg.grids.k_peak.values();
    let pairs: Vec<(f64, f64)> = amps.iter().flat_map(|&a| ks.iter().map(move |&k| (a, k))).collect();
    let pg = par_map(&pairs, |&(a, k)| pump(&base.with_amplitude(a).with_k(k), &cfg.trotter))?;
    let mut t = ResultTable::new(&["a_ph", "k", "p_g"], meta);
    for ((a, k), p) in pairs.into_iter().zip(pg) {
        t.push(vec![a, k, p]);
    }
    Ok(t)
}

fn initial_states(cfg: &RunConfig, meta: serde_json::Value) -> Result<ResultTable, RunError> {
    let p = cfg.drive_params();
    let weights = cfg.grids.weights.values();
    let traces = par_map(&weights, |&w| {
        let point = || format!("excited weight {w}");
        let start = weighted_initial_state(&p, w).map_err(|e| RunError::compute(point(), e))?;
        evolve(&p, &cfg.trotter, Some(start)).map_err(|e| RunError::compute(point(), e))
    })?;
    let mut t = ResultTable::new(&["weight", "cycle", "p_j", "p_n"], meta);
    for (w, tr) in weights.iter().zip(traces) {
        for (m, (pj, pn)) in tr.p_j.iter().zip(&tr.p_n).enumerate() {
            t.push(vec![*w, (m + 1) as f64, *pj, *pn]);
        }
    }
    Ok(t)
}

fn ensemble(cfg: &RunConfig, meta: serde_json::Value) -> Result<ResultTable, RunError> {
    let tr = ensemble_average(&cfg.ensemble).map_err(|e| RunError::compute("ensemble".into(), e))?;
    let mut t = ResultTable::new(&["t", "p_ens", "entropy", "p_first"], meta);
    for i in 0..tr.times.len() {
        t.push(vec![tr.times[i], tr.p_ens[i], tr.entropy[i], tr.p_first[i]]);
    }
    Ok(t)
}

fn verify_cyclemap(cfg: &RunConfig, meta: serde_json::Value) -> Result<ResultTable, RunError> {
    let thetas = cfg.grids.theta.values();
    let phis = cfg.grids.phi.values();
    let pairs: Vec<(f64, f64)> = thetas.iter().flat_map(|&a| phis.iter().map(move |&b| (a, b))).collect();
    let n = cfg.verify.n_cycles;
    let rows = par_map(&pairs, |&(theta, phi)| {
        let c = CycleParams { theta, phi, omega_az: cfg.cycle.omega_az };
        let closed = p_g_closed(&c);
        let series =
            p_series_mean(&c, n).map_err(|e| RunError::compute(format!("theta = {theta}, phi = {phi}"), e))?;
        Ok(vec![theta, phi, closed, series, (closed - series).abs()])
    })?;
    let mut t = ResultTable::new(&["theta", "phi", "p_closed", "p_series_mean", "abs_diff"], meta);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn curve_table(x: &str, c: &PumpCurve, meta: serde_json::Value) -> ResultTable {
    let mut t = ResultTable::new(&[x, "q_gp", "q_fgr", "mu", "gap"], meta);
    for i in 0..c.abscissa.len() {
        t.push(vec![c.abscissa[i], c.q_gp[i], c.q_fgr[i], c.mu[i], c.gap[i]]);
    }
    t
}

fn unitarity(cfg: &RunConfig, meta: serde_json::Value) -> Result<ResultTable, RunError> {
    let p = cfg.drive_params();
    let orders: Vec<u32> = cfg.grids.orders.values().iter().map(|&o| o as u32).collect();
    let rows = par_map(&orders, |&o| {
        let point = || format!("taylor_order = {o}");
        let taylor = TrotterConfig { mode: StepMode::Taylor, taylor_order: o, ..cfg.trotter };
        let r = unitarity_report(&p, &taylor).map_err(|e| RunError::compute(point(), e))?;
        let s = convergence_study(&p, &taylor, cfg.refinement.base_steps, cfg.refinement.levels)
            .map_err(|e| RunError::compute(point(), e))?;
        Ok(vec![o as f64, r.defect_taylor, r.defect_exact, r.max_dev_vs_exact, s.observed_order])
    })?;
    let mut t = ResultTable::new(
        &["taylor_order", "defect_taylor", "defect_exact", "max_dev_vs_exact", "observed_order"],
        meta,
    );
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// Writes `bytes` to `path` (`-` for stdout). Files are written to a
/// temporary sibling and renamed, so a failed write leaves nothing behind.
pub fn write_output(bytes: &[u8], path: &str) -> Result<(), RunError> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).map_err(RunError::io)?;
        return out.flush().map_err(RunError::io);
    }
    let target = Path::new(path);
    let dir = match target.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| RunError::io(format!("{path}: {e}")))?;
    tmp.write_all(bytes).map_err(|e| RunError::io(format!("{path}: {e}")))?;
    tmp.persist(target).map_err(|e| RunError::io(format!("{path}: {}", e.error)))?;
    Ok(())
}
