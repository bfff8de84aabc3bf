//! Run configuration: one JSON document plus dotted `--set` overrides.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::RunError;
use crate::band::{DriveParams, ModelUnits, DEFAULT_TAU_CYCLE_PS};
use crate::cyclemap::CycleParams;
use crate::ensemble::EnsembleConfig;
use crate::propagator::TrotterConfig;
use crate::thermo::ThermalModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SweepK,
    SweepEps0,
    SweepAmplitude,
    InitialStates,
    Ensemble,
    VerifyCyclemap,
    Thermal,
    Fluence,
    UnitarityReport,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SweepK => "sweep-k",
            Self::SweepEps0 => "sweep-eps0",
            Self::SweepAmplitude => "sweep-amplitude",
            Self::InitialStates => "initial-states",
            Self::Ensemble => "ensemble",
            Self::VerifyCyclemap => "verify-cyclemap",
            Self::Thermal => "thermal",
            Self::Fluence => "fluence",
            Self::UnitarityReport => "unitarity-report",
        }
    }
}

/// A swept axis: an explicit list, or `count` points between `start` and
/// `stop` (endpoints included, or cell midpoints when `midpoint` is set).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Axis {
    Values {
        values: Vec<f64>,
    },
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        midpoint: bool,
    },
}

impl Axis {
    pub fn range(start: f64, stop: f64, count: usize) -> Self {
        Self::Range { start, stop, count, midpoint: false }
    }

    pub fn midpoints(start: f64, stop: f64, count: usize) -> Self {
        Self::Range { start, stop, count, midpoint: true }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Values { values } => values.clone(),
            Self::Range { start, stop, count, midpoint } => {
                let n = *count;
                if n == 0 {
                    Vec::new()
                } else if *midpoint {
                    let h = (stop - start) / n as f64;
                    (0..n).map(|i| start + (i as f64 + 0.5) * h).collect()
                } else if n == 1 {
                    vec![*start]
                } else {
                    let h = (stop - start) / (n - 1) as f64;
                    (0..n).map(|i| if i + 1 == n { *stop } else { start + i as f64 * h }).collect()
                }
            }
        }
    }

    fn check(&self, path: &str) -> Result<(), RunError> {
        let v = self.values();
        if v.is_empty() {
            return Err(RunError::config(path, "axis has no points"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(RunError::config(path, "axis has non-finite points"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitsSection {
    pub mev_per_energy_unit: f64,
    /// Drive period in ps; fixes `ω` unless `drive.omega` is given.
    pub tau_cycle_ps: f64,
}

impl Default for UnitsSection {
    fn default() -> Self {
        Self {
            mev_per_energy_unit: ModelUnits::default().mev_per_energy_unit,
            tau_cycle_ps: DEFAULT_TAU_CYCLE_PS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveSection {
    pub k: f64,
    pub eps0: f64,
    pub a_ph: f64,
    /// Angular frequency in model units; derived from `units` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

impl Default for DriveSection {
    fn default() -> Self {
        let d = DriveParams::default();
        Self { k: d.k, eps0: d.eps0, a_ph: d.a_ph, omega: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// k axis of sweep-k.
    pub k: Axis,
    /// k axis maximized over in sweep-eps0 and sweep-amplitude.
    pub k_peak: Axis,
    pub eps0: Axis,
    pub a_ph: Axis,
    pub theta: Axis,
    pub phi: Axis,
    pub temperature: Axis,
    pub fluence: Axis,
    /// Excited-band weights of the initial states.
    pub weights: Axis,
    /// Taylor orders compared by unitarity-report.
    pub orders: Axis,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            k: Axis::range(-FRAC_PI_4, FRAC_PI_4, 401),
            k_peak: Axis::midpoints(0.0, 0.1, 400),
            eps0: Axis::range(-1.05, -0.75, 121),
            a_ph: Axis::Values { values: vec![0.05, 0.1, 0.2, 0.4] },
            theta: Axis::midpoints(0.05, PI - 0.05, 50),
            phi: Axis::midpoints(0.05, PI - 0.05, 50),
            temperature: Axis::range(0.0, 300.0, 301),
            fluence: Axis::range(0.0, 30.0, 31),
            weights: Axis::Values { values: vec![0.0, 0.25, 0.5, 0.75, 1.0] },
            orders: Axis::Values { values: vec![1.0, 2.0, 3.0, 4.0] },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    /// Cycles in the series mean compared with the closed form.
    pub n_cycles: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { n_cycles: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FluenceSection {
    /// Lattice temperature of the fluence sweep (K).
    pub temperature: f64,
}

impl Default for FluenceSection {
    fn default() -> Self {
        // μ(20 K) = +6 meV with the default model: n-doped
        Self { temperature: 20.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefinementSection {
    pub base_steps: usize,
    pub levels: usize,
}

impl Default for RefinementSection {
    fn default() -> Self {
        Self { base_steps: 5000, levels: 5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    /// Where to write the table; `-` is standard output.
    pub output_path: String,
    pub units: UnitsSection,
    pub drive: DriveSection,
    pub trotter: TrotterConfig,
    pub cycle: CycleParams,
    pub ensemble: EnsembleConfig,
    pub thermal: ThermalModel,
    pub grids: Grids,
    pub verify: VerifySection,
    pub fluence: FluenceSection,
    pub refinement: RefinementSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            output_path: "-".into(),
            units: UnitsSection::default(),
            drive: DriveSection::default(),
            trotter: TrotterConfig::default(),
            cycle: CycleParams::default(),
            ensemble: EnsembleConfig::default(),
            thermal: ThermalModel::default(),
            grids: Grids::default(),
            verify: VerifySection::default(),
            fluence: FluenceSection::default(),
            refinement: RefinementSection::default(),
        }
    }
}

impl RunConfig {
    /// Reads `path` (or starts from defaults), applies `key=value` overrides
    /// and deserializes.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, RunError> {
        let doc = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| RunError::config(&p.display().to_string(), &e.to_string()))?;
                serde_json::from_str(&text).map_err(|e| {
                    RunError::config(&p.display().to_string(), &format!("not valid JSON: {e}"))
                })?
            }
            None => Value::Object(Default::default()),
        };
        let mut doc = {
            let mut base = serde_json::to_value(Self::default()).expect("defaults serialize");
            merge(&mut base, doc, "");
            base
        };
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        Self::from_value(doc)
    }

    pub fn from_value(doc: Value) -> Result<Self, RunError> {
        serde_path_to_error::deserialize(doc).map_err(|e| {
            let path = e.path().to_string();
            RunError::config(&path, &e.into_inner().to_string())
        })
    }

    /// Drive parameters with `ω` resolved.
    pub fn drive_params(&self) -> DriveParams {
        let units = ModelUnits { mev_per_energy_unit: self.units.mev_per_energy_unit };
        let omega = self
            .drive
            .omega
            .unwrap_or_else(|| units.omega_for_period(self.units.tau_cycle_ps));
        DriveParams { k: self.drive.k, eps0: self.drive.eps0, a_ph: self.drive.a_ph, omega }
    }

    /// Checks everything `exp` will touch before any computation.
    pub fn validate(&self, exp: Experiment) -> Result<(), RunError> {
        use Experiment::*;
        let wrap = |path: &str, r: crate::Result<()>| r.map_err(|e| RunError::config(path, &e.to_string()));
        if !(self.units.mev_per_energy_unit > 0.0 && self.units.mev_per_energy_unit.is_finite()) {
            return Err(RunError::config("units.mev_per_energy_unit", "must be positive"));
        }
        if !(self.units.tau_cycle_ps > 0.0 && self.units.tau_cycle_ps.is_finite()) {
            return Err(RunError::config("units.tau_cycle_ps", "must be positive"));
        }
        if self.output_path.is_empty() {
            return Err(RunError::config("output_path", "must not be empty"));
        }
        let g = &self.grids;
        match exp {
            SweepK | SweepEps0 | SweepAmplitude | InitialStates | UnitarityReport => {
                wrap("drive", self.drive_params().validate())?;
                wrap("trotter", self.trotter.validate())?;
            }
            _ => {}
        }
        match exp {
            SweepK => g.k.check("grids.k")?,
            SweepEps0 => {
                g.eps0.check("grids.eps0")?;
                g.k_peak.check("grids.k_peak")?;
            }
            SweepAmplitude => {
                g.a_ph.check("grids.a_ph")?;
                g.k_peak.check("grids.k_peak")?;
                if g.a_ph.values().iter().any(|&a| a < 0.0) {
                    return Err(RunError::config("grids.a_ph", "amplitudes must be >= 0"));
                }
            }
            InitialStates => {
                g.weights.check("grids.weights")?;
                if g.weights.values().iter().any(|w| !(0.0..=1.0).contains(w)) {
                    return Err(RunError::config("grids.weights", "weights must lie in [0, 1]"));
                }
            }
            Ensemble => wrap("ensemble", self.ensemble.validate())?,
            VerifyCyclemap => {
                g.theta.check("grids.theta")?;
                g.phi.check("grids.phi")?;
                if g.theta.values().iter().any(|t| !(0.0..=PI).contains(t)) {
                    return Err(RunError::config("grids.theta", "theta must lie in [0, π]"));
                }
                if self.verify.n_cycles == 0 {
                    return Err(RunError::config("verify.n_cycles", "must be >= 1"));
                }
            }
            Thermal => {
                wrap("thermal", self.thermal.validate())?;
                g.temperature.check("grids.temperature")?;
                if g.temperature.values().iter().any(|&t| t < 0.0) {
                    return Err(RunError::config("grids.temperature", "temperatures must be >= 0"));
                }
            }
            Fluence => {
                wrap("thermal", self.thermal.validate())?;
                g.fluence.check("grids.fluence")?;
                if g.fluence.values().iter().any(|&f| f < 0.0) {
                    return Err(RunError::config("grids.fluence", "fluences must be >= 0"));
                }
                if !(self.fluence.temperature >= 0.0 && self.fluence.temperature.is_finite()) {
                    return Err(RunError::config("fluence.temperature", "must be >= 0"));
                }
            }
            UnitarityReport => {
                g.orders.check("grids.orders")?;
                if g.orders.values().iter().any(|&o| o < 1.0 || o.fract() != 0.0) {
                    return Err(RunError::config("grids.orders", "orders must be integers >= 1"));
                }
                if self.refinement.levels < 4 {
                    return Err(RunError::config("refinement.levels", "need at least 4 levels"));
                }
                if self.refinement.base_steps < 100 {
                    return Err(RunError::config("refinement.base_steps", "must be >= 100"));
                }
            }
        }
        Ok(())
    }
}

/// Deep-merges `over` into `base`. Axes under `grids` are replaced whole so
/// a list can stand in for a range.
fn merge(base: &mut Value, over: Value, path: &str) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) if !path.starts_with("grids.") => {
            for (k, v) in o {
                let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v, &sub),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Applies `a.b.c=value`; the value is parsed as JSON, falling back to a
/// plain string.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<(), RunError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| RunError::config(spec, "override must look like key.path=value"))?;
    let path = path.trim();
    if path.is_empty() || path.split('.').any(str::is_empty) {
        return Err(RunError::config(path, "empty key in override path"));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = doc;
    let keys: Vec<&str> = path.split('.').collect();
    for (i, key) in keys.iter().enumerate() {
        if !node.is_object() {
            let at = keys[..i].join(".");
            return Err(RunError::config(&at, "cannot descend into a non-object value"));
        }
        let map = node.as_object_mut().expect("checked above");
        if i + 1 == keys.len() {
            map.insert((*key).to_string(), value);
            return Ok(());
        }
        node = map.entry((*key).to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("loop returns on the last key")
}
