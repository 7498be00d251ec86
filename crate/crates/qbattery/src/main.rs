//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on configuration or runtime errors,
//! 2 when the validation suite reports failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qbattery::harness::{ConfigBuilder, FaultInjection, MetricName};
use qbattery::{
    closed_form_eigenvalues, gibbs_closed_form, gibbs_numeric, hermitian_eigen, EvolutionMode,
    QbError, RateConvention,
};

#[derive(Parser)]
#[command(
    name = "qbattery",
    version,
    about = "Two-qubit dipolar quantum battery simulator"
)]
struct Cli {
    /// Flat key-value config file (dotted keys); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for CSV/JSON outputs.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the closed-system propagation mode.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Override the dephasing rate convention.
    #[arg(long = "rate-convention", global = true, value_enum)]
    rate_convention: Option<ConventionArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ChargerOnly,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Paper,
    Lindblad,
}

#[derive(Subcommand)]
enum Command {
    /// Print the battery spectrum: closed form against the eigensolver.
    Eigen,
    /// Build the thermal state by both routes and report agreement.
    Thermal,
    /// Run the charging (or configured open-system) trajectory to CSV.
    Evolve,
    /// Run the dephasing trajectory to CSV (requires dephasing.* keys).
    Dephase,
    /// Run the configured parameter sweep to per-value CSVs.
    Sweep,
    /// Run every oracle cross-check and report pass/fail.
    Validate {
        /// Debug hook: perturb one Gibbs element to prove the check bites.
        #[arg(long, hide = true)]
        inject_gibbs_fault: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn builder(cli: &Cli) -> Result<ConfigBuilder, QbError> {
    let mut b = match &cli.config {
        Some(path) => ConfigBuilder::from_file(path)?,
        None => ConfigBuilder::default(),
    };
    if let Some(mode) = cli.mode {
        b.override_mode(match mode {
            ModeArg::ChargerOnly => EvolutionMode::ChargerOnly,
            ModeArg::Full => EvolutionMode::Full,
        });
    }
    if let Some(conv) = cli.rate_convention {
        b.override_rate_convention(match conv {
            ConventionArg::Paper => RateConvention::PaperSubspace,
            ConventionArg::Lindblad => RateConvention::FullLindblad,
        });
    }
    Ok(b)
}

fn dispatch(cli: &Cli) -> Result<ExitCode, QbError> {
    match &cli.command {
        Command::Eigen => {
            let config = builder(cli)?.build_run()?;
            let mut closed = closed_form_eigenvalues(&config.battery);
            closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let numeric =
                hermitian_eigen(&qbattery::battery_hamiltonian(&config.battery))?.eigenvalues;
            println!(
                "battery spectrum at delta={} epsilon={} D={} B={} (eta={:.6}, chi={:.6})",
                config.battery.delta,
                config.battery.epsilon,
                config.battery.dm,
                config.battery.field,
                config.battery.eta(),
                config.battery.chi()
            );
            println!(
                "{:>4}  {:>22}  {:>22}  {:>10}",
                "k", "closed form", "eigensolver", "|diff|"
            );
            let mut csv = String::from("k,closed_form,numeric,abs_diff\n");
            for (k, (c, n)) in closed.iter().zip(&numeric).enumerate() {
                println!("{k:>4}  {c:>22.15}  {n:>22.15}  {:>10.2e}", (c - n).abs());
                csv.push_str(&format!("{k},{c:.14e},{n:.14e},{:.14e}\n", (c - n).abs()));
            }
            std::fs::create_dir_all(&cli.out)?;
            std::fs::write(cli.out.join("eigen.csv"), csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Thermal => {
            let config = builder(cli)?.build_run()?;
            let closed = gibbs_closed_form(&config.battery, &config.thermal)?;
            let numeric = gibbs_numeric(&config.battery, &config.thermal)?;
            let diff = closed.rho.matrix().max_abs_diff(numeric.rho.matrix());
            println!(
                "thermal state at T = {} (Z = {:.12}):",
                config.thermal.temperature(),
                closed.partition_function
            );
            for i in 0..4 {
                let row: Vec<String> = (0..4)
                    .map(|j| {
                        let z = closed.rho.matrix()[(i, j)];
                        format!("{:+.6}{:+.6}i", z.re, z.im)
                    })
                    .collect();
                println!("  [{}]", row.join("  "));
            }
            println!("closed form vs matrix exponential: max |diff| = {diff:.3e}");
            let mut csv = String::from("i,j,re,im\n");
            for i in 0..4 {
                for j in 0..4 {
                    let z = closed.rho.matrix()[(i, j)];
                    csv.push_str(&format!("{i},{j},{:.14e},{:.14e}\n", z.re, z.im));
                }
            }
            std::fs::create_dir_all(&cli.out)?;
            std::fs::write(cli.out.join("thermal.csv"), csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve => {
            let config = builder(cli)?.build_run()?;
            let table = qbattery::harness::run_to_files(&config, &cli.out, "run")?;
            println!(
                "wrote {} rows to {}; peak W = {:.6}",
                table.rows.len(),
                cli.out.join("run.csv").display(),
                table.peak_work()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Dephase => {
            let mut b = builder(cli)?;
            // The dephasing trajectory always reports the closed-form
            // damped-Rabi column alongside the integrated work.
            let config = {
                let probe = b.build_run()?;
                if probe.dephasing.is_none() {
                    return Err(QbError::config(
                        "dephasing.gamma_b",
                        "the dephase command needs dephasing.* parameters",
                    ));
                }
                if !probe.wants(MetricName::DephasingWork) {
                    let mut names: Vec<String> =
                        probe.outputs.iter().map(|m| m.to_string()).collect();
                    names.push(MetricName::DephasingWork.to_string());
                    b.set("outputs", &names.join(","))?;
                }
                b.build_run()?
            };
            let table = qbattery::harness::run_to_files(&config, &cli.out, "dephase")?;
            println!(
                "wrote {} rows to {}; final W_dephase = {:.6e}",
                table.rows.len(),
                cli.out.join("dephase.csv").display(),
                table
                    .rows
                    .last()
                    .and_then(|r| r.dephasing_work)
                    .unwrap_or(f64::NAN)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep => {
            let sweep_config = builder(cli)?.build_sweep()?;
            let points = qbattery::harness::sweep(&sweep_config, &cli.out)?;
            println!(
                "swept {} over {} values into {}",
                sweep_config.axis,
                points.len(),
                cli.out.display()
            );
            for p in &points {
                println!(
                    "  {} = {:<8} peak W = {:.6}  K = {:+.6}",
                    sweep_config.axis, p.value, p.peak_work, p.capacity
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { inject_gibbs_fault } => {
            let report = qbattery::harness::validate(&FaultInjection {
                gibbs_element_perturbation: *inject_gibbs_fault,
            })?;
            print!("{}", report.render());
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}
