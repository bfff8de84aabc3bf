//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line, then asserts.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads=1` to
//! see the lines in order.

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use geopump::band::DriveParams;
use geopump::cyclemap::{orbit_axis, p_g_closed, p_infinity_orbit, CycleParams, OrbitAxis};
use geopump::ensemble::{ensemble_average, member_states, EnsembleConfig};
use geopump::experiment::{emit, run, Axis, Experiment, Format, RunConfig};
use geopump::propagator::{
    convergence_study, evolve, unitarity_report, weighted_initial_state, StepMode, TrotterConfig,
};
use geopump::su2::{von_neumann_entropy, DensityMatrix2};
use geopump::thermo::{fgr_factor, fluence_sweep, geometric_factor, gp_probability, temperature_sweep, ThermalModel};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn verdict(n: u32, title: &str, pass: bool, detail: &str) {
    println!("{} criterion {n:>2} ({title}): {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} ({title}) failed: {detail}");
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Points of the default ε₀ grid that fall in `[lo, hi]`, plus `extra`.
fn default_eps0_points(lo: f64, hi: f64) -> Vec<f64> {
    RunConfig::default()
        .grids
        .eps0
        .values()
        .into_iter()
        .filter(|&e| e >= lo - 1e-12 && e <= hi + 1e-12)
        .collect()
}

fn max_pg_at(eps: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut cfg = RunConfig::default();
    cfg.grids.eps0 = Axis::Values { values: eps.to_vec() };
    let t = run(&cfg, Experiment::SweepEps0, None).unwrap();
    (t.column("max_p_g").unwrap(), t.column("k_at_max").unwrap())
}

#[test]
fn criterion_01_analytic_dichotomy() {
    let start = Instant::now();
    let worst = std::cell::Cell::new(0.0f64);
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let res = runner.run(&(-10.0..10.0f64), |phi| {
        let on = p_g_closed(&CycleParams { theta: PI, phi, omega_az: 0.0 });
        let off = p_g_closed(&CycleParams { theta: 0.0, phi, omega_az: 0.0 });
        worst.set(worst.get().max((on - 0.5).abs()).max(off.abs()));
        prop_assert!(on == 0.5 && off == 0.0);
        Ok(())
    });
    let worst = worst.get();
    let dt = secs(start.elapsed());
    verdict(1, "analytic dichotomy", res.is_ok() && worst == 0.0 && dt < 1.0, &format!("max deviation {worst:e}, {dt:.3} s"));
}

#[test]
fn criterion_02_closed_form_vs_series() {
    let start = Instant::now();
    let t = run(&RunConfig::default(), Experiment::VerifyCyclemap, None).unwrap();
    let dt = secs(start.elapsed());
    let mut d = t.column("abs_diff").unwrap();
    d.sort_by(f64::total_cmp);
    let max = *d.last().unwrap();
    let median = 0.5 * (d[d.len() / 2 - 1] + d[d.len() / 2]);
    let pass = d.len() == 2500 && max <= 1e-2 && median <= 1e-3 && dt < 60.0;
    verdict(2, "closed form vs series", pass, &format!("{} cells, max {max:.3e}, median {median:.3e}, {dt:.1} s", d.len()));
}

#[test]
fn criterion_03_orbit_integration() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let alpha = PI * (i as f64 + 0.5) / 100.0;
        let q = p_infinity_orbit(&OrbitAxis { alpha, beta: 0.0 }, 1024).unwrap();
        worst = worst.max((q - 0.5 * alpha.sin().powi(2)).abs());
    }
    // and through orbit_axis for cycle parameters
    for i in 1..10 {
        let c = CycleParams { theta: 0.3 * i as f64, phi: 0.7 * i as f64, omega_az: 0.0 };
        let ax = orbit_axis(&c).unwrap();
        worst = worst.max((p_infinity_orbit(&ax, 1024).unwrap() - p_g_closed(&c)).abs());
    }
    let dt = secs(start.elapsed());
    verdict(3, "orbit integration", worst <= 1e-9 && dt < 1.0, &format!("max deviation {worst:.2e}, {dt:.3} s"));
}

#[test]
fn criterion_04_tpt_step() {
    let start = Instant::now();
    let window = default_eps0_points(-0.92, -0.88);
    let mut eps = vec![-0.95, -0.80];
    eps.extend(&window);
    let (pg, _) = max_pg_at(&eps);
    let (tpt, none, step) = (pg[0], pg[1], &pg[2..]);
    // non-increasing up to the finite-cycle resolution 1/n of the running mean
    let tol = 1.0 / TrotterConfig::default().n_cycles as f64;
    let rises: Vec<String> = step
        .windows(2)
        .zip(&window)
        .filter(|(w, _)| w[1] > w[0] + tol)
        .map(|(w, e)| format!("{e:.4}: {:.3}->{:.3}", w[0], w[1]))
        .collect();
    let pass = tpt >= 0.4 && none <= 0.1 && rises.is_empty() && window.len() == 17;
    let trace: Vec<String> = step.iter().map(|p| format!("{p:.3}")).collect();
    verdict(
        4,
        "TPT step",
        pass,
        &format!(
            "max p_G {tpt:.4} at -0.95, {none:.4} at -0.80; window [{}]; rises beyond {tol}: {rises:?}; {:.1} s",
            trace.join(" "),
            secs(start.elapsed())
        ),
    );
}

#[test]
fn criterion_05_fractionality_ceiling() {
    let start = Instant::now();
    let mut cfg = RunConfig::default();
    cfg.drive.eps0 = -0.95;
    cfg.trotter.n_cycles = 100;
    let t = run(&cfg, Experiment::SweepAmplitude, None).unwrap();
    let a = t.column("a_ph").unwrap();
    let p = t.column("p_g").unwrap();
    let mut per_amp = Vec::new();
    for amp in [0.05, 0.1, 0.2, 0.4] {
        let m = a.iter().zip(&p).filter(|(x, _)| **x == amp).map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
        per_amp.push((amp, m));
    }
    let pass = per_amp.iter().all(|&(_, m)| m <= 0.55);
    verdict(5, "fractionality ceiling", pass, &format!("max p_G per A_ph {per_amp:?}, {:.1} s", secs(start.elapsed())));
}

#[test]
fn criterion_06_non_directionality() {
    let (_, kmax) = max_pg_at(&[-0.95]);
    let p = DriveParams { k: kmax[0], ..RunConfig::default().drive_params().with_eps0(-0.95) };
    let cfg = TrotterConfig::default().with_cycles(200);
    let from_ground = evolve(&p, &cfg, None).unwrap().final_mean();
    let excited = weighted_initial_state(&p, 1.0).unwrap();
    let from_excited = evolve(&p, &cfg, Some(excited)).unwrap().final_mean();
    let pass = (from_ground - 0.5).abs() <= 0.05 && (from_excited - 0.5).abs() <= 0.05;
    verdict(
        6,
        "non-directionality",
        pass,
        &format!("k = {:.5}: ground start {from_ground:.4}, excited start {from_excited:.4}", kmax[0]),
    );
}

#[test]
fn criterion_07_ensemble_plateau() {
    let start = Instant::now();
    let cfg = EnsembleConfig { t_max: 20.0, ..EnsembleConfig::default() };
    let tr = ensemble_average(&cfg).unwrap();
    let st = tr.plateau(7.0).unwrap();
    let mut member_s: f64 = 0.0;
    for &t in tr.times.iter().step_by(25) {
        for s in member_states(&cfg, t).unwrap() {
            member_s = member_s.max(von_neumann_entropy(&DensityMatrix2::pure(&s).unwrap()));
        }
    }
    let p_ok = st.p_min >= 0.48 && st.p_max <= 0.52;
    let s_ok = (st.s_min - LN_2).abs() <= 0.01 && (st.s_max - LN_2).abs() <= 0.01;
    let dt = secs(start.elapsed());
    verdict(
        7,
        "ensemble plateau and entropy",
        p_ok && s_ok && member_s <= 1e-12 && dt < 10.0,
        &format!(
            "t >= 7 ps: p_ens in [{:.4}, {:.4}] (mean {:.4}); S in [{:.4}, {:.4}] vs ln 2 = {LN_2:.4}; \
             member S <= {member_s:.1e}; {dt:.2} s",
            st.p_min, st.p_max, st.p_mean, st.s_min, st.s_max
        ),
    );
}

#[test]
fn criterion_08_geometric_rule_algebra() {
    let start = Instant::now();
    let mut runner = TestRunner::new(Config { cases: 10_000, failure_persistence: None, ..Config::default() });
    let res = runner.run(&(0.0..=1.0f64, 0.0..=1.0f64), |(a, b)| {
        let g = geometric_factor(a, b);
        prop_assert!((0.0..=1.0).contains(&g));
        prop_assert_eq!(g, geometric_factor(b, a));
        prop_assert!((g - (a * (1.0 - b) + b * (1.0 - a))).abs() < 1e-15);
        prop_assert_eq!(fgr_factor(a, b), -fgr_factor(b, a));
        Ok(())
    });
    let corners = [(1.0, 1.0, 0.0), (0.0, 1.0, 0.5), (1.0, 0.0, 0.5), (0.0, 0.0, 0.0)];
    let corners_ok = corners.iter().all(|&(v, c, w)| gp_probability(v, c, 1).unwrap() == w);
    let dt = secs(start.elapsed());
    verdict(
        8,
        "geometric rule algebra",
        res.is_ok() && corners_ok && dt < 1.0,
        &format!("10^4 samples {}, Table I corners {}, {dt:.3} s", if res.is_ok() { "ok" } else { "violated" }, corners_ok),
    );
}

#[test]
fn criterion_09_peak_vs_dip() {
    let m = ThermalModel::default();
    let temps: Vec<f64> = (0..=300).map(f64::from).collect();
    let c = temperature_sweep(&m, &temps).unwrap();
    let i_b = m.t_berry as usize;
    let dip = c.q_fgr[i_b] == 0.0;
    let positive = c.q_gp[i_b] > 0.0;
    let q = &c.q_gp;
    let local_max: Vec<usize> = (i_b - 5..=i_b + 5)
        .filter(|&i| q[i] >= q[i - 1] && q[i] >= q[i + 1] && (q[i] > q[i - 1] || q[i] > q[i + 1]))
        .collect();
    let window: Vec<String> = (i_b - 5..=i_b + 5).map(|i| format!("{:.5}", q[i])).collect();
    verdict(
        9,
        "peak vs dip",
        dip && positive && !local_max.is_empty(),
        &format!(
            "q_fgr(t_berry) = {}, q_gp(t_berry) = {:.5}; q_gp on [155, 165] K = [{}]; local maxima at {local_max:?}",
            c.q_fgr[i_b],
            q[i_b],
            window.join(" ")
        ),
    );
}

#[test]
fn criterion_10_fluence_anomaly() {
    let cfg = RunConfig::default();
    let f = cfg.grids.fluence.values();
    let t = cfg.fluence.temperature;
    let c = fluence_sweep(&cfg.thermal, t, &f).unwrap();
    let rising: Vec<f64> = f.windows(2).zip(c.q_gp.windows(2)).filter(|(_, q)| q[1] >= q[0]).map(|(x, _)| x[1]).collect();
    let fgr_up = c.q_fgr.windows(2).all(|w| w[1] > w[0]);
    // the same sweep where μ(T) < 0 from the start
    let p_doped = fluence_sweep(&cfg.thermal, 100.0, &f).unwrap();
    let p_doped_down = p_doped.q_gp.windows(2).all(|w| w[1] < w[0]);
    verdict(
        10,
        "fluence anomaly",
        rising.is_empty() && fgr_up,
        &format!(
            "T = {t} K, mu = {:.2} meV (n-doped): q_gp not decreasing at F = {rising:?}; q_fgr strictly increasing: {fgr_up}; \
             p-doped control (T = 100 K, mu = {:.2} meV) decreasing everywhere: {p_doped_down}",
            c.mu[0], p_doped.mu[0]
        ),
    );
}

#[test]
fn criterion_11_trotter_fidelity() {
    let start = Instant::now();
    let (_, kmax) = max_pg_at(&[-0.95]);
    let p = RunConfig::default().drive_params().with_eps0(-0.95).with_k(kmax[0]);
    let cfg = TrotterConfig::default().with_order(4);
    let r = unitarity_report(&p, &cfg).unwrap();
    let study = convergence_study(&p, &TrotterConfig::default().with_order(2), 5000, 5).unwrap();
    let exact = convergence_study(&p, &TrotterConfig::default().with_mode(StepMode::Exact), 5000, 5).unwrap();
    let pass = r.max_dev_vs_exact <= 1e-4 && study.observed_order >= 1.8;
    verdict(
        11,
        "Trotter fidelity",
        pass,
        &format!(
            "k = {:.5}: |p_n(taylor 4) - p_n(exact)| = {:.2e}; order-2 refinement slope {:.3} (exact-step slope {:.3}); {:.1} s",
            kmax[0],
            r.max_dev_vs_exact,
            study.observed_order,
            exact.observed_order,
            secs(start.elapsed())
        ),
    );
}

#[test]
fn criterion_12_determinism() {
    let max_workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let mut cfg = RunConfig::default();
    cfg.grids.k = Axis::range(-0.05, 0.05, 21);
    let mut outputs = Vec::new();
    for exp in [Experiment::SweepK, Experiment::Thermal, Experiment::Ensemble] {
        for workers in [1, max_workers, 1, max_workers] {
            let t = run(&cfg, exp, Some(workers)).unwrap();
            outputs.push((exp, workers, emit(&t, Format::Csv).unwrap(), emit(&t, Format::Json).unwrap()));
        }
    }
    let same = outputs.chunks(4).all(|g| g.iter().all(|o| o.2 == g[0].2 && o.3 == g[0].3));
    verdict(12, "determinism", same, &format!("3 sweeps x 2 runs x workers {{1, {max_workers}}}: byte-identical = {same}"));
}
