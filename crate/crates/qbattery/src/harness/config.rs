//! Run and sweep configuration.
//!
//! Configs are flat key-value text with dotted keys:
//!
//! ```text
//! battery.delta = 2.0
//! thermal.temperature = 0.5
//! outputs = work, power, capacity, coherence
//! sweep.axis = T
//! sweep.values = 0.5, 1.0, 1.5, 2.0
//! ```
//!
//! `#` starts a comment. Unknown keys are rejected with the offending
//! field named. Command-line flags override file values.

use std::fmt;
use std::path::Path;

use crate::charging::EvolutionMode;
use crate::dephasing::{DephasingParams, RateConvention};
use crate::error::QbError;
use crate::model::{BatteryParams, ChargerParams};
use crate::thermal::ThermalSpec;

/// Metric columns a run can emit. The first four are always present in
/// the CSV; the last two add optional columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricName {
    Work,
    Power,
    Capacity,
    Coherence,
    PassiveErgotropy,
    DephasingWork,
}

impl MetricName {
    pub const ALL: [MetricName; 6] = [
        MetricName::Work,
        MetricName::Power,
        MetricName::Capacity,
        MetricName::Coherence,
        MetricName::PassiveErgotropy,
        MetricName::DephasingWork,
    ];

    fn parse(token: &str) -> Result<Self, QbError> {
        match token {
            "work" => Ok(MetricName::Work),
            "power" => Ok(MetricName::Power),
            "capacity" => Ok(MetricName::Capacity),
            "coherence" => Ok(MetricName::Coherence),
            "passive_ergotropy" => Ok(MetricName::PassiveErgotropy),
            "dephasing_work" => Ok(MetricName::DephasingWork),
            other => Err(QbError::config(
                "outputs",
                format!(
                    "unknown metric {other:?} (expected one of work, power, capacity, \
                     coherence, passive_ergotropy, dephasing_work)"
                ),
            )),
        }
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MetricName::Work => "work",
            MetricName::Power => "power",
            MetricName::Capacity => "capacity",
            MetricName::Coherence => "coherence",
            MetricName::PassiveErgotropy => "passive_ergotropy",
            MetricName::DephasingWork => "dephasing_work",
        };
        f.write_str(s)
    }
}

/// Uniform time grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub t_max: f64,
    pub n_steps: usize,
}

/// Fully resolved configuration for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub battery: BatteryParams,
    pub charger: ChargerParams,
    pub thermal: ThermalSpec,
    pub mode: EvolutionMode,
    pub rate_convention: RateConvention,
    /// Present for open-system (dephasing) runs.
    pub dephasing: Option<DephasingParams>,
    pub grid: GridSpec,
    pub outputs: Vec<MetricName>,
}

impl Default for RunConfig {
    /// The base parameter point of the study: Delta = eps = 2, D = 1,
    /// B = 1, Omega = 1, T = 0.5, two drive periods on a 1001-point grid.
    fn default() -> Self {
        RunConfig {
            battery: BatteryParams {
                delta: 2.0,
                epsilon: 2.0,
                dm: 1.0,
                field: 1.0,
            },
            charger: ChargerParams { omega: 1.0 },
            thermal: ThermalSpec::new(0.5).expect("positive temperature"),
            mode: EvolutionMode::ChargerOnly,
            rate_convention: RateConvention::PaperSubspace,
            dephasing: None,
            grid: GridSpec {
                t_max: 2.0 * std::f64::consts::PI,
                n_steps: 1001,
            },
            outputs: vec![
                MetricName::Work,
                MetricName::Power,
                MetricName::Capacity,
                MetricName::Coherence,
            ],
        }
    }
}

impl RunConfig {
    pub fn wants(&self, metric: MetricName) -> bool {
        self.outputs.contains(&metric)
    }
}

/// Parameter axis a sweep can scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Temperature,
    Dm,
    Field,
    Delta,
    Epsilon,
    GammaPhi,
    Omega,
}

impl SweepAxis {
    fn parse(token: &str) -> Result<Self, QbError> {
        match token {
            "T" => Ok(SweepAxis::Temperature),
            "D" => Ok(SweepAxis::Dm),
            "B" => Ok(SweepAxis::Field),
            "delta" => Ok(SweepAxis::Delta),
            "epsilon" => Ok(SweepAxis::Epsilon),
            "gamma_phi" => Ok(SweepAxis::GammaPhi),
            "omega" => Ok(SweepAxis::Omega),
            other => Err(QbError::config(
                "sweep.axis",
                format!("unknown axis {other:?} (expected T, D, B, delta, epsilon, gamma_phi, omega)"),
            )),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SweepAxis::Temperature => "T",
            SweepAxis::Dm => "D",
            SweepAxis::Field => "B",
            SweepAxis::Delta => "delta",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::GammaPhi => "gamma_phi",
            SweepAxis::Omega => "omega",
        };
        f.write_str(s)
    }
}

/// A base run replicated across one parameter axis.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// When sweeping `delta`, also set `epsilon` to the same value
    /// (the paired-coupling scan).
    pub pair_epsilon: bool,
}

impl SweepConfig {
    /// Resolve the run configuration at one axis value.
    pub fn at(&self, value: f64) -> Result<RunConfig, QbError> {
        let mut run = self.base.clone();
        match self.axis {
            SweepAxis::Temperature => run.thermal = ThermalSpec::new(value)?,
            SweepAxis::Dm => run.battery.dm = value,
            SweepAxis::Field => run.battery.field = value,
            SweepAxis::Delta => {
                run.battery.delta = value;
                if self.pair_epsilon {
                    run.battery.epsilon = value;
                }
            }
            SweepAxis::Epsilon => run.battery.epsilon = value,
            SweepAxis::GammaPhi => {
                let (omega0, convention) = match &run.dephasing {
                    Some(dp) => (dp.omega0, dp.rate_convention),
                    None => (1.0, run.rate_convention),
                };
                run.dephasing = Some(DephasingParams::symmetric(value, omega0, convention)?);
            }
            SweepAxis::Omega => run.charger.omega = value,
        }
        Ok(run)
    }
}

/// Config file plus overrides, before finalization.
#[derive(Clone, Debug, Default)]
pub struct ConfigBuilder {
    battery: BatteryParams2,
    omega: Option<f64>,
    temperature: Option<f64>,
    mode: Option<EvolutionMode>,
    rate_convention: Option<RateConvention>,
    gamma_b: Option<f64>,
    gamma_c: Option<f64>,
    omega0: Option<f64>,
    t_max: Option<f64>,
    n_steps: Option<usize>,
    outputs: Option<Vec<MetricName>>,
    sweep_axis: Option<SweepAxis>,
    sweep_values: Option<Vec<f64>>,
    pair_epsilon: Option<bool>,
}

#[derive(Clone, Copy, Debug, Default)]
struct BatteryParams2 {
    delta: Option<f64>,
    epsilon: Option<f64>,
    dm: Option<f64>,
    field: Option<f64>,
}

impl ConfigBuilder {
    /// Parse a config file into the builder.
    pub fn from_file(path: &Path) -> Result<Self, QbError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            QbError::config("config", format!("cannot read {}: {e}", path.display()))
        })?;
        let mut builder = ConfigBuilder::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(QbError::config(
                    "config",
                    format!("line {}: expected `key = value`, got {raw:?}", lineno + 1),
                ));
            };
            builder.set(key.trim(), value.trim())?;
        }
        Ok(builder)
    }

    /// Set one dotted key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), QbError> {
        match key {
            "battery.delta" => self.battery.delta = Some(parse_f64(key, value)?),
            "battery.epsilon" => self.battery.epsilon = Some(parse_f64(key, value)?),
            "battery.dm" => self.battery.dm = Some(parse_f64(key, value)?),
            "battery.field" => self.battery.field = Some(parse_f64(key, value)?),
            "charger.omega" => self.omega = Some(parse_f64(key, value)?),
            "thermal.temperature" => self.temperature = Some(parse_f64(key, value)?),
            "mode" => {
                self.mode = Some(match value {
                    "charger-only" => EvolutionMode::ChargerOnly,
                    "full" => EvolutionMode::Full,
                    other => {
                        return Err(QbError::config(
                            key,
                            format!("expected charger-only or full, got {other:?}"),
                        ))
                    }
                })
            }
            "rate_convention" => {
                self.rate_convention = Some(match value {
                    "paper" => RateConvention::PaperSubspace,
                    "lindblad" => RateConvention::FullLindblad,
                    other => {
                        return Err(QbError::config(
                            key,
                            format!("expected paper or lindblad, got {other:?}"),
                        ))
                    }
                })
            }
            "dephasing.gamma_b" => self.gamma_b = Some(parse_f64(key, value)?),
            "dephasing.gamma_c" => self.gamma_c = Some(parse_f64(key, value)?),
            "dephasing.omega0" => self.omega0 = Some(parse_f64(key, value)?),
            "grid.t_max" => self.t_max = Some(parse_f64(key, value)?),
            "grid.n_steps" => {
                self.n_steps = Some(value.parse().map_err(|_| {
                    QbError::config(key, format!("expected an integer, got {value:?}"))
                })?)
            }
            "outputs" => {
                let parsed = value
                    .split(',')
                    .map(|t| MetricName::parse(t.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                self.outputs = Some(parsed);
            }
            "sweep.axis" => self.sweep_axis = Some(SweepAxis::parse(value)?),
            "sweep.values" => {
                let parsed = value
                    .split(',')
                    .map(|t| parse_f64("sweep.values", t.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                self.sweep_values = Some(parsed);
            }
            "sweep.pair_epsilon" => {
                self.pair_epsilon = Some(match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(QbError::config(
                            key,
                            format!("expected true or false, got {other:?}"),
                        ))
                    }
                })
            }
            other => {
                return Err(QbError::config(
                    other,
                    "unknown configuration key".to_string(),
                ))
            }
        }
        Ok(())
    }

    pub fn override_mode(&mut self, mode: EvolutionMode) {
        self.mode = Some(mode);
    }

    pub fn override_rate_convention(&mut self, convention: RateConvention) {
        self.rate_convention = Some(convention);
    }

    /// Finalize into a run config, filling gaps from the defaults.
    pub fn build_run(&self) -> Result<RunConfig, QbError> {
        let defaults = RunConfig::default();
        let rate_convention = self.rate_convention.unwrap_or(defaults.rate_convention);
        let dephasing = match (self.gamma_b, self.gamma_c, self.omega0) {
            (None, None, None) => None,
            (gb, gc, w0) => Some(DephasingParams::new(
                gb.unwrap_or(0.0),
                gc.unwrap_or(0.0),
                w0.unwrap_or(1.0),
                rate_convention,
            )?),
        };
        let grid = GridSpec {
            t_max: self.t_max.unwrap_or(defaults.grid.t_max),
            n_steps: self.n_steps.unwrap_or(defaults.grid.n_steps),
        };
        if !(grid.t_max.is_finite() && grid.t_max > 0.0) {
            return Err(QbError::config(
                "grid.t_max",
                format!("must be finite and positive, got {}", grid.t_max),
            ));
        }
        if grid.n_steps < 2 {
            return Err(QbError::config(
                "grid.n_steps",
                format!("must be at least 2, got {}", grid.n_steps),
            ));
        }
        let battery = BatteryParams {
            delta: self.battery.delta.unwrap_or(defaults.battery.delta),
            epsilon: self.battery.epsilon.unwrap_or(defaults.battery.epsilon),
            dm: self.battery.dm.unwrap_or(defaults.battery.dm),
            field: self.battery.field.unwrap_or(defaults.battery.field),
        };
        for (name, value) in [
            ("battery.delta", battery.delta),
            ("battery.epsilon", battery.epsilon),
            ("battery.dm", battery.dm),
            ("battery.field", battery.field),
        ] {
            if !value.is_finite() {
                return Err(QbError::config(name, format!("must be finite, got {value}")));
            }
        }
        let charger = ChargerParams {
            omega: self.omega.unwrap_or(defaults.charger.omega),
        };
        if !charger.omega.is_finite() {
            return Err(QbError::config(
                "charger.omega",
                format!("must be finite, got {}", charger.omega),
            ));
        }
        let thermal = match self.temperature {
            Some(t) => ThermalSpec::new(t)?,
            None => defaults.thermal,
        };
        let config = RunConfig {
            battery,
            charger,
            thermal,
            mode: self.mode.unwrap_or(defaults.mode),
            rate_convention,
            dephasing,
            grid,
            outputs: self.outputs.clone().unwrap_or(defaults.outputs),
        };
        if config.wants(MetricName::DephasingWork) && config.dephasing.is_none() {
            return Err(QbError::config(
                "outputs",
                "dephasing_work requires the dephasing.* parameters",
            ));
        }
        Ok(config)
    }

    /// Finalize into a sweep config; requires axis and values.
    pub fn build_sweep(&self) -> Result<SweepConfig, QbError> {
        let base = self.build_run()?;
        let axis = self.sweep_axis.ok_or_else(|| {
            QbError::config("sweep.axis", "required for sweeps but not set")
        })?;
        let values = self
            .sweep_values
            .clone()
            .ok_or_else(|| QbError::config("sweep.values", "required for sweeps but not set"))?;
        if values.is_empty() {
            return Err(QbError::config("sweep.values", "must not be empty"));
        }
        Ok(SweepConfig {
            base,
            axis,
            values,
            pair_epsilon: self.pair_epsilon.unwrap_or(false),
        })
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, QbError> {
    value
        .parse::<f64>()
        .map_err(|_| QbError::config(key, format!("expected a number, got {value:?}")))
}
