//! Run and sweep execution with CSV/JSON export.
//!
//! Output contract: CSV files carry the header
//! `t,W,P,K,C[,W_passive][,W_dephase]`, one row per grid time, every
//! number printed with 15 significant digits and LF line endings. A
//! JSON sidecar records the fully resolved configuration and the tool
//! version. Everything is deterministic: re-running a config produces
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::json;

use crate::charging::{generator, trajectory, EvolutionMode};
use crate::dephasing::{
    battery_charger_hamiltonian, closed_form_ergotropy, effective_coupling, integrate_lindblad,
    lindblad_rhs,
};
use crate::error::QbError;
use crate::harness::config::{MetricName, RunConfig, SweepConfig};
use crate::metrics::{
    capacity, l1_coherence, passive_ergotropy, sample, stored_work, CoherenceSpec,
};
use crate::model::battery_hamiltonian;
use crate::operator::DensityMatrix;
use crate::thermal::gibbs_numeric;

/// One emitted row.
#[derive(Clone, Copy, Debug)]
pub struct MetricRow {
    pub t: f64,
    pub work: f64,
    pub power: f64,
    pub capacity: f64,
    pub coherence: f64,
    pub passive: Option<f64>,
    pub dephasing_work: Option<f64>,
}

/// Full metric table of one run.
#[derive(Clone, Debug)]
pub struct MetricTable {
    pub rows: Vec<MetricRow>,
}

impl MetricTable {
    pub fn peak_work(&self) -> f64 {
        self.rows.iter().map(|r| r.work).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn peak_coherence(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.coherence)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Peak of the closed-form dephasing column, when emitted.
    pub fn peak_dephasing_work(&self) -> Option<f64> {
        self.rows
            .iter()
            .map(|r| r.dephasing_work)
            .collect::<Option<Vec<f64>>>()
            .map(|ws| ws.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Render with the fixed header and 15-significant-digit numbers.
    pub fn to_csv(&self) -> String {
        let has_passive = self.rows.first().is_some_and(|r| r.passive.is_some());
        let has_dephase = self.rows.first().is_some_and(|r| r.dephasing_work.is_some());
        let mut out = String::from("t,W,P,K,C");
        if has_passive {
            out.push_str(",W_passive");
        }
        if has_dephase {
            out.push_str(",W_dephase");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{}",
                sig15(row.t),
                sig15(row.work),
                sig15(row.power),
                sig15(row.capacity),
                sig15(row.coherence)
            );
            if let Some(p) = row.passive {
                let _ = write!(out, ",{}", sig15(p));
            }
            if let Some(w) = row.dephasing_work {
                let _ = write!(out, ",{}", sig15(w));
            }
            out.push('\n');
        }
        out
    }
}

fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

/// Execute one run: closed-system charging when no dephasing block is
/// configured, open-system battery-charger dynamics otherwise.
pub fn run(config: &RunConfig) -> Result<MetricTable, QbError> {
    match &config.dephasing {
        None => run_charging(config),
        Some(_) => run_dephasing(config),
    }
}

/// Thermal init, unitary charging, one metrics row per grid time.
fn run_charging(config: &RunConfig) -> Result<MetricTable, QbError> {
    let h_b = battery_hamiltonian(&config.battery);
    let gen = generator(&config.battery, &config.charger, config.mode);
    let rho_thermal = gibbs_numeric(&config.battery, &config.thermal)?.rho;
    let coherence_spec = CoherenceSpec::two_qubit();
    let traj = trajectory(
        &rho_thermal,
        &config.battery,
        &config.charger,
        config.mode,
        config.grid.t_max,
        config.grid.n_steps,
    )?;
    let want_passive = config.wants(MetricName::PassiveErgotropy);

    let rows = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, state)| {
            let base = sample(t, state, &rho_thermal, &h_b, &gen, &coherence_spec)?;
            Ok(MetricRow {
                t: base.t,
                work: base.work,
                power: base.power,
                capacity: base.capacity,
                coherence: base.coherence,
                passive: if want_passive {
                    Some(passive_ergotropy(state, &h_b)?.extractable)
                } else {
                    None
                },
                dephasing_work: None,
            })
        })
        .collect::<Result<Vec<_>, QbError>>()?;
    Ok(MetricTable { rows })
}

/// Lindblad evolution of the battery-charger pair from the
/// single-excitation start |10><10|.
///
/// W is the energy gained relative to t = 0 and P its exact rate
/// Tr[L(rho) H]; the optional W_dephase column carries the closed-form
/// damped-Rabi ergotropy, so both readings of the open-system "work"
/// are emitted side by side.
fn run_dephasing(config: &RunConfig) -> Result<MetricTable, QbError> {
    let dp = config
        .dephasing
        .as_ref()
        .expect("run_dephasing requires dephasing params");
    let h = battery_charger_hamiltonian(&config.battery, dp);
    let derived = effective_coupling(&config.battery, dp);
    let rho0 = DensityMatrix::basis_state(2);
    let coherence_spec = CoherenceSpec::two_qubit();
    let traj = integrate_lindblad(
        &rho0,
        &config.battery,
        dp,
        config.grid.t_max,
        config.grid.n_steps,
    )?;
    let k = capacity(&h);
    let want_passive = config.wants(MetricName::PassiveErgotropy);
    let want_dephase = config.wants(MetricName::DephasingWork);

    let rows = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, state)| {
            let power = (&lindblad_rhs(state.matrix(), &h, dp) * &h).trace().re;
            Ok(MetricRow {
                t,
                work: stored_work(state, &rho0, &h)?,
                power,
                capacity: k,
                coherence: l1_coherence(state, &coherence_spec),
                passive: if want_passive {
                    Some(passive_ergotropy(state, &h)?.extractable)
                } else {
                    None
                },
                dephasing_work: if want_dephase {
                    Some(closed_form_ergotropy(t, &derived, dp))
                } else {
                    None
                },
            })
        })
        .collect::<Result<Vec<_>, QbError>>()?;
    Ok(MetricTable { rows })
}

/// Run a config and write `<name>.csv` plus `<name>.json` under `out`.
pub fn run_to_files(config: &RunConfig, out: &Path, name: &str) -> Result<MetricTable, QbError> {
    let table = run(config)?;
    fs::create_dir_all(out)?;
    fs::write(out.join(format!("{name}.csv")), table.to_csv())?;
    fs::write(
        out.join(format!("{name}.json")),
        render_sidecar(config, None),
    )?;
    Ok(table)
}

/// Summary line of one sweep point.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub value: f64,
    pub peak_work: f64,
    pub peak_coherence: f64,
    pub capacity: f64,
    pub peak_dephasing_work: Option<f64>,
}

/// Execute a sweep: one `<axis>=<value>.csv` per value, a
/// `summary.csv` of peak metrics in axis order, and a `sweep.json`
/// sidecar.
///
/// Values run as independent jobs on up to `QB_THREADS` workers
/// (default: one per value). Each job writes only its own file and the
/// summary is assembled after all jobs finish, so scheduling cannot
/// affect the bytes produced.
pub fn sweep(config: &SweepConfig, out: &Path) -> Result<Vec<SweepPoint>, QbError> {
    fs::create_dir_all(out)?;
    let n_jobs = config.values.len();
    let threads = match std::env::var("QB_THREADS") {
        Ok(raw) => raw
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                QbError::config("QB_THREADS", format!("expected a positive integer, got {raw:?}"))
            })?,
        Err(_) => n_jobs,
    }
    .min(n_jobs);

    let next_job = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<SweepPoint, QbError>>>> =
        Mutex::new((0..n_jobs).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next_job.fetch_add(1, Ordering::SeqCst);
                if idx >= n_jobs {
                    break;
                }
                let value = config.values[idx];
                let outcome = sweep_job(config, value, out);
                results.lock().unwrap()[idx] = Some(outcome);
            });
        }
    });

    let mut points = Vec::with_capacity(n_jobs);
    for slot in results.into_inner().unwrap() {
        points.push(slot.expect("every job index visited")?);
    }

    let with_dephase = points.iter().all(|p| p.peak_dephasing_work.is_some());
    let mut summary = String::from("axis,value,peak_W,peak_C,K");
    if with_dephase {
        summary.push_str(",peak_W_dephase");
    }
    summary.push('\n');
    for point in &points {
        let _ = write!(
            summary,
            "{},{},{},{},{}",
            config.axis,
            point.value,
            sig15(point.peak_work),
            sig15(point.peak_coherence),
            sig15(point.capacity)
        );
        if let Some(w) = point.peak_dephasing_work.filter(|_| with_dephase) {
            let _ = write!(summary, ",{}", sig15(w));
        }
        summary.push('\n');
    }
    fs::write(out.join("summary.csv"), summary)?;
    fs::write(out.join("sweep.json"), render_sweep_sidecar(config))?;
    Ok(points)
}

fn sweep_job(config: &SweepConfig, value: f64, out: &Path) -> Result<SweepPoint, QbError> {
    let run_config = config.at(value)?;
    let table = run(&run_config)?;
    let file = out.join(format!("{}={}.csv", config.axis, value));
    fs::write(file, table.to_csv())?;
    Ok(SweepPoint {
        value,
        peak_work: table.peak_work(),
        peak_coherence: table.peak_coherence(),
        capacity: table.rows.first().map_or(f64::NAN, |r| r.capacity),
        peak_dephasing_work: table.peak_dephasing_work(),
    })
}

/// JSON record of the resolved configuration and tool version.
pub fn render_sidecar(config: &RunConfig, sweep: Option<&SweepConfig>) -> String {
    let mode = match config.mode {
        EvolutionMode::ChargerOnly => "charger-only",
        EvolutionMode::Full => "full",
    };
    let convention = match config.rate_convention {
        crate::dephasing::RateConvention::PaperSubspace => "paper",
        crate::dephasing::RateConvention::FullLindblad => "lindblad",
    };
    let dephasing = config.dephasing.as_ref().map(|dp| {
        json!({
            "gamma_b": dp.gamma_b,
            "gamma_c": dp.gamma_c,
            "gamma_phi": dp.gamma_phi(),
            "omega0": dp.omega0,
        })
    });
    let mut value = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "battery": {
            "delta": config.battery.delta,
            "epsilon": config.battery.epsilon,
            "dm": config.battery.dm,
            "field": config.battery.field,
        },
        "charger": { "omega": config.charger.omega },
        "thermal": { "temperature": config.thermal.temperature() },
        "mode": mode,
        "rate_convention": convention,
        "dephasing": dephasing,
        "grid": { "t_max": config.grid.t_max, "n_steps": config.grid.n_steps },
        "outputs": config.outputs.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    });
    if let Some(sw) = sweep {
        value["sweep"] = json!({
            "axis": sw.axis.to_string(),
            "values": sw.values,
            "pair_epsilon": sw.pair_epsilon,
        });
    }
    let mut text = serde_json::to_string_pretty(&value).expect("static JSON structure");
    text.push('\n');
    text
}

fn render_sweep_sidecar(config: &SweepConfig) -> String {
    render_sidecar(&config.base, Some(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{ConfigBuilder, SweepAxis};
    use crate::tol;

    #[test]
    fn charging_run_emits_consistent_rows() {
        let mut config = RunConfig::default();
        config.grid.n_steps = 101;
        let table = run(&config).unwrap();
        assert_eq!(table.rows.len(), 101);
        assert_eq!(table.rows[0].t, 0.0);
        assert!(table.rows[0].work.abs() < tol::ALGEBRAIC);
        for row in &table.rows {
            assert!((row.capacity + 1.0).abs() < tol::ALGEBRAIC);
            assert!((-1e-12..=1.0 + 1e-12).contains(&row.coherence));
        }
    }

    #[test]
    fn csv_has_header_and_fifteen_digit_numbers() {
        let mut config = RunConfig::default();
        config.grid.n_steps = 3;
        let table = run(&config).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,W,P,K,C");
        let first = lines.next().unwrap();
        assert!(first.starts_with("0.00000000000000e0,"));
        assert!(!csv.contains('\r'));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn passive_column_appears_when_requested() {
        let mut b = ConfigBuilder::default();
        b.set("outputs", "work, power, capacity, coherence, passive_ergotropy")
            .unwrap();
        b.set("grid.n_steps", "5").unwrap();
        let config = b.build_run().unwrap();
        let table = run(&config).unwrap();
        assert!(table.to_csv().starts_with("t,W,P,K,C,W_passive\n"));
        // From a Gibbs start under unitary evolution the two work
        // notions coincide.
        for row in &table.rows {
            assert!((row.passive.unwrap() - row.work).abs() < 1e-9);
        }
    }

    #[test]
    fn dephasing_run_emits_closed_form_column() {
        let mut b = ConfigBuilder::default();
        b.set("battery.delta", "2.0").unwrap();
        b.set("battery.dm", "0.0").unwrap();
        b.set("dephasing.gamma_b", "0.5").unwrap();
        b.set("dephasing.gamma_c", "0.5").unwrap();
        b.set("grid.t_max", "15.0").unwrap();
        b.set("grid.n_steps", "2001").unwrap();
        b.set(
            "outputs",
            "work, power, capacity, coherence, dephasing_work",
        )
        .unwrap();
        let config = b.build_run().unwrap();
        let table = run(&config).unwrap();
        assert!(table.to_csv().starts_with("t,W,P,K,C,W_dephase\n"));
        // kappa = 1/3 here; the closed form starts at kappa and is
        // essentially dead by t = 12/Gamma.
        let first = table.rows.first().unwrap().dephasing_work.unwrap();
        assert!((first - 1.0 / 3.0).abs() < tol::ALGEBRAIC);
        let last = table.rows.last().unwrap().dephasing_work.unwrap();
        assert!(last < 0.01 / 3.0);
        // Capacity of the battery-charger Hamiltonian is -omega0.
        assert!((table.rows[0].capacity + 1.0).abs() < tol::ALGEBRAIC);
    }

    #[test]
    fn dephasing_power_tracks_work_derivative() {
        let mut b = ConfigBuilder::default();
        b.set("dephasing.gamma_b", "0.25").unwrap();
        b.set("dephasing.gamma_c", "0.25").unwrap();
        b.set("grid.t_max", "10.0").unwrap();
        b.set("grid.n_steps", "2001").unwrap();
        let config = b.build_run().unwrap();
        let table = run(&config).unwrap();
        let dt = table.rows[1].t - table.rows[0].t;
        for w in table.rows.windows(3) {
            let fd = (w[2].work - w[0].work) / (2.0 * dt);
            assert!(
                (w[1].power - fd).abs() < 1e-4,
                "P = {} vs dW/dt = {fd} at t = {}",
                w[1].power,
                w[1].t
            );
        }
    }

    #[test]
    fn sweep_writes_per_value_files_and_summary() {
        let dir = std::env::temp_dir().join(format!("qbattery-sweep-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let mut b = ConfigBuilder::default();
        b.set("sweep.axis", "T").unwrap();
        b.set("sweep.values", "0.5, 1.0").unwrap();
        b.set("grid.n_steps", "51").unwrap();
        let sweep_config = b.build_sweep().unwrap();
        let points = sweep(&sweep_config, &dir).unwrap();
        assert_eq!(points.len(), 2);
        assert!(dir.join("T=0.5.csv").exists());
        assert!(dir.join("T=1.csv").exists());
        assert!(dir.join("summary.csv").exists());
        assert!(dir.join("sweep.json").exists());
        // Colder runs store more: the first summary row beats the second.
        assert!(points[0].peak_work > points[1].peak_work);
        assert_eq!(sweep_config.axis, SweepAxis::Temperature);
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn sidecar_is_deterministic_json() {
        let config = RunConfig::default();
        let a = render_sidecar(&config, None);
        let b = render_sidecar(&config, None);
        assert_eq!(a, b);
        assert!(a.contains("\"version\""));
        assert!(a.contains("\"temperature\": 0.5"));
    }
}
