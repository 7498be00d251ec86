//! Acceptance suite: every shipped claim checked at its stated
//! tolerance against an independent oracle, one test per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion pass lines and measured residuals.

use std::f64::consts::PI;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qbattery::charging::generator;
use qbattery::harness::validate::fit_peak_decay_rate;
use qbattery::{
    battery_hamiltonian, capacity, charging_hamiltonian, charging_unitary,
    closed_form_eigenvalues, closed_form_ergotropy, closed_form_z, effective_coupling, evolve,
    gibbs_closed_form, gibbs_numeric, hermitian_eigen, hermitian_function, instantaneous_power,
    integrate_lindblad, integrate_subspace, l1_coherence, stored_work, tol, BatteryParams,
    ChargerParams, CoherenceSpec, DensityMatrix, DephasingParams, EvolutionMode, RateConvention,
    SubspaceState, ThermalSpec,
};

use num_complex::Complex64;

const BASE: BatteryParams = BatteryParams {
    delta: 2.0,
    epsilon: 2.0,
    dm: 1.0,
    field: 1.0,
};
const DRIVE: ChargerParams = ChargerParams { omega: 1.0 };

fn random_params(rng: &mut ChaCha8Rng) -> BatteryParams {
    BatteryParams {
        delta: rng.gen_range(-5.0..5.0),
        epsilon: rng.gen_range(-5.0..5.0),
        dm: rng.gen_range(-5.0..5.0),
        field: rng.gen_range(-5.0..5.0),
    }
}

fn pass(name: &str, detail: String) {
    println!("[PASS] {name}: {detail}");
}

/// Sorted closed-form eigenvalues match the dense eigensolver to 1e-10
/// over 1000 seeded draws in [-5, 5]^4.
#[test]
fn spectrum_closed_form_matches_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 1000 {
        let p = random_params(&mut rng);
        if p.epsilon == 0.0 || p.chi() == 0.0 {
            continue;
        }
        done += 1;
        let mut closed = closed_form_eigenvalues(&p);
        closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let numeric = hermitian_eigen(&battery_hamiltonian(&p)).unwrap().eigenvalues;
        for (c, n) in closed.iter().zip(&numeric) {
            worst = worst.max((c - n).abs());
        }
    }
    assert!(worst < 1e-10, "spectrum residual {worst:.3e}");
    pass(
        "spectrum oracle",
        format!("1000 draws, max |closed - numeric| = {worst:.3e} < 1e-10"),
    );
}

/// Closed-form Gibbs state equals exp(-beta H)/Z elementwise to 1e-10
/// over 1000 seeded draws with T in [0.1, 10]; the realized sign of
/// the corner element is reported once.
#[test]
fn gibbs_closed_form_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut corner_opposite_to_eps = true;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let spec = ThermalSpec::new(rng.gen_range(0.1..10.0)).unwrap();
        let closed = gibbs_closed_form(&p, &spec).unwrap();
        let numeric = gibbs_numeric(&p, &spec).unwrap();
        worst = worst.max(closed.rho.matrix().max_abs_diff(numeric.rho.matrix()));
        if numeric.rho.matrix()[(0, 3)].re * p.epsilon > 0.0 {
            corner_opposite_to_eps = false;
        }
    }
    assert!(worst < 1e-10, "gibbs residual {worst:.3e}");
    assert!(corner_opposite_to_eps);
    pass(
        "gibbs oracle",
        format!(
            "1000 draws, max elementwise diff = {worst:.3e} < 1e-10; corner element \
             rho_14 realized with sign opposite to epsilon (the explicit minus sign)"
        ),
    );
}

/// The closed-form drive unitary equals exp(-i H_c t) to 1e-12 on a
/// 200-point grid over one full cycle.
#[test]
fn charging_unitary_matches_matrix_exponential() {
    let h_c = charging_hamiltonian(&DRIVE);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let t = 2.0 * PI * (k as f64) / 199.0;
        let expm = hermitian_function(&h_c, |l| Complex64::new(0.0, -l * t).exp()).unwrap();
        worst = worst.max(charging_unitary(&DRIVE, t).max_abs_diff(&expm));
    }
    assert!(worst < 1e-12, "unitary residual {worst:.3e}");
    pass(
        "charging unitary oracle",
        format!("200-point grid, max |closed - expm| = {worst:.3e} < 1e-12"),
    );
}

/// W(0) = 0 exactly; W and C_l1 have period pi/Omega to 1e-10; C_l1
/// stays in [0, 1]; K = -B to 1e-12 for every swept parameter set;
/// analytic power matches the central finite difference of W to 1e-6
/// at 1000 times.
#[test]
fn metric_identities_hold() {
    let h_b = battery_hamiltonian(&BASE);
    let rho0 = gibbs_numeric(&BASE, &ThermalSpec::new(0.5).unwrap()).unwrap().rho;
    let spec = CoherenceSpec::two_qubit();

    // Exact zero at t = 0.
    assert_eq!(stored_work(&rho0, &rho0, &h_b).unwrap(), 0.0);

    // Periodicity of W and C under the drive-only propagator.
    let period = PI / DRIVE.omega;
    let mut worst_period: f64 = 0.0;
    for k in 0..100 {
        let t = period * (k as f64) / 99.0;
        let a = evolve(&rho0, &BASE, &DRIVE, EvolutionMode::ChargerOnly, t).unwrap();
        let b = evolve(&rho0, &BASE, &DRIVE, EvolutionMode::ChargerOnly, t + period).unwrap();
        let wa = stored_work(&a, &rho0, &h_b).unwrap();
        let wb = stored_work(&b, &rho0, &h_b).unwrap();
        worst_period = worst_period.max((wa - wb).abs());
        let ca = l1_coherence(&a, &spec);
        let cb = l1_coherence(&b, &spec);
        worst_period = worst_period.max((ca - cb).abs());
        assert!((-1e-12..=1.0 + 1e-12).contains(&ca), "coherence out of range");
    }
    assert!(worst_period < 1e-10, "periodicity residual {worst_period:.3e}");

    // K = -B across every parameter set the figure sweeps touch (the
    // temperature sweep reuses the base couplings).
    let mut swept: Vec<BatteryParams> = vec![BASE];
    for dm in [0.0, 1.0, 2.0, 3.0] {
        swept.push(BatteryParams { dm, ..BASE });
    }
    for d in [2.0, 3.0, 4.0, 5.0] {
        swept.push(BatteryParams {
            delta: d,
            epsilon: d,
            ..BASE
        });
    }
    for field in [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0] {
        swept.push(BatteryParams { field, ..BASE });
    }
    let mut worst_k: f64 = 0.0;
    for p in &swept {
        worst_k = worst_k.max((capacity(&battery_hamiltonian(p)) + p.field).abs());
    }
    assert!(worst_k < 1e-12, "capacity residual {worst_k:.3e}");

    // Analytic power vs central finite difference, 1000 times.
    let h = tol::POWER_FD_STEP;
    let mut worst_power: f64 = 0.0;
    for mode in [EvolutionMode::ChargerOnly, EvolutionMode::Full] {
        let gen = generator(&BASE, &DRIVE, mode);
        for k in 0..500 {
            let t = 0.01 + PI * (k as f64) / 499.0;
            let state = evolve(&rho0, &BASE, &DRIVE, mode, t).unwrap();
            let analytic = instantaneous_power(&state, &gen, &h_b).unwrap();
            let plus = evolve(&rho0, &BASE, &DRIVE, mode, t + h).unwrap();
            let minus = evolve(&rho0, &BASE, &DRIVE, mode, t - h).unwrap();
            let fd = (stored_work(&plus, &rho0, &h_b).unwrap()
                - stored_work(&minus, &rho0, &h_b).unwrap())
                / (2.0 * h);
            worst_power = worst_power.max((analytic - fd).abs());
        }
    }
    assert!(worst_power < 1e-6, "power residual {worst_power:.3e}");

    pass(
        "metric identities",
        format!(
            "W(0) = 0 exact; period residual {worst_period:.3e} < 1e-10; C_l1 in [0,1]; \
             K+B residual {worst_k:.3e} < 1e-12 on {} parameter sets; power-vs-FD \
             residual {worst_power:.3e} < 1e-6 at 1000 times",
            swept.len()
        ),
    );
}

fn peaks_over_one_period(p: &BatteryParams, temperature: f64) -> (f64, f64) {
    let h_b = battery_hamiltonian(p);
    let rho0 = gibbs_numeric(p, &ThermalSpec::new(temperature).unwrap()).unwrap().rho;
    let spec = CoherenceSpec::two_qubit();
    let mut peak_w = f64::NEG_INFINITY;
    let mut peak_c = f64::NEG_INFINITY;
    let n = 801;
    for k in 0..n {
        let t = (PI / DRIVE.omega) * (k as f64) / ((n - 1) as f64);
        let state = evolve(&rho0, p, &DRIVE, EvolutionMode::ChargerOnly, t).unwrap();
        peak_w = peak_w.max(stored_work(&state, &rho0, &h_b).unwrap());
        peak_c = peak_c.max(l1_coherence(&state, &spec));
    }
    (peak_w, peak_c)
}

/// Strict figure-trend orderings with the captions' exact parameters:
/// peak W falls with T, rises with D and with the paired couplings;
/// peak C_l1 rises with D.
#[test]
fn figure_trends_reproduce() {
    let temp_peaks: Vec<f64> = [0.5, 1.0, 1.5, 2.0]
        .iter()
        .map(|&t| peaks_over_one_period(&BASE, t).0)
        .collect();
    assert!(
        temp_peaks.windows(2).all(|w| w[0] > w[1]),
        "peak W not strictly decreasing in T: {temp_peaks:?}"
    );

    let dm_peaks: Vec<(f64, f64)> = [0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&dm| peaks_over_one_period(&BatteryParams { dm, ..BASE }, 0.5))
        .collect();
    assert!(
        dm_peaks.windows(2).all(|w| w[0].0 < w[1].0),
        "peak W not strictly increasing in D: {dm_peaks:?}"
    );
    assert!(
        dm_peaks.windows(2).all(|w| w[0].1 < w[1].1),
        "peak C not strictly increasing in D: {dm_peaks:?}"
    );

    let dipolar_peaks: Vec<f64> = [2.0, 3.0, 4.0, 5.0]
        .iter()
        .map(|&d| {
            peaks_over_one_period(
                &BatteryParams {
                    delta: d,
                    epsilon: d,
                    ..BASE
                },
                0.5,
            )
            .0
        })
        .collect();
    assert!(
        dipolar_peaks.windows(2).all(|w| w[0] < w[1]),
        "peak W not strictly increasing in paired couplings: {dipolar_peaks:?}"
    );

    // Capacity magnitude grows with the field.
    let k_magnitudes: Vec<f64> = [0.5, 1.0, 1.5, 2.0]
        .iter()
        .map(|&field| capacity(&battery_hamiltonian(&BatteryParams { field, ..BASE })).abs())
        .collect();
    assert!(k_magnitudes.windows(2).all(|w| w[0] < w[1]));

    pass(
        "figure trends",
        format!(
            "peak W vs T strictly falls {temp_peaks:?}; vs D strictly rises \
             {:?}; vs paired couplings strictly rises {dipolar_peaks:?}; peak C vs D \
             strictly rises {:?}; |K| strictly rises with B {k_magnitudes:?}",
            dm_peaks.iter().map(|p| p.0).collect::<Vec<_>>(),
            dm_peaks.iter().map(|p| p.1).collect::<Vec<_>>()
        ),
    );
}

/// Closed-form z(t) and W(t) match RK4 integration of the reduced
/// equations to 1e-6 over t in [0, 20] for the full rate/coupling
/// grid; W decays below 0.01 kappa past t = 12/Gamma; Gamma = 0 pins
/// W at kappa to 1e-9.
#[test]
fn dephasing_closed_forms_match_rk4() {
    let mut worst: f64 = 0.0;
    for gamma in [0.25, 0.5, 0.75, 1.0] {
        for dm in [0.0, 1.0, 2.0, 3.0, 4.0] {
            let p = BatteryParams {
                delta: 2.0,
                epsilon: 0.0,
                dm,
                field: 0.0,
            };
            let dp = DephasingParams::symmetric(gamma, 1.0, RateConvention::PaperSubspace).unwrap();
            let d = effective_coupling(&p, &dp);
            assert!(d.kappa > 0.0);
            let traj = integrate_subspace(&SubspaceState::charger_excited(), &d, &dp, 20.0, 16001)
                .unwrap();
            for (t, s) in traj.times.iter().zip(&traj.states) {
                worst = worst.max((s.z() - closed_form_z(*t, &d, &dp)).abs());
                let bloch = d.kappa * (s.z() * s.z() + 4.0 * s.v.norm_sqr()).sqrt();
                worst = worst.max((bloch - closed_form_ergotropy(*t, &d, &dp)).abs());
            }
            // Decay claim on the closed form itself.
            let t_floor = 12.0 / gamma;
            for k in 0..50 {
                let t = t_floor * (1.0 + 0.02 * k as f64);
                assert!(
                    closed_form_ergotropy(t, &d, &dp) < 0.01 * d.kappa,
                    "W too large at t = {t}, Gamma = {gamma}, D = {dm}"
                );
            }
        }
    }
    assert!(worst < 1e-6, "closed-form residual {worst:.3e}");

    // Gamma = 0: W pinned at kappa.
    let p = BatteryParams {
        delta: 2.0,
        epsilon: 0.0,
        dm: 1.0,
        field: 0.0,
    };
    let dp = DephasingParams::symmetric(0.0, 1.0, RateConvention::PaperSubspace).unwrap();
    let d = effective_coupling(&p, &dp);
    let mut worst_pin: f64 = 0.0;
    for k in 0..2000 {
        let t = 20.0 * (k as f64) / 1999.0;
        worst_pin = worst_pin.max((closed_form_ergotropy(t, &d, &dp) - d.kappa).abs());
    }
    assert!(worst_pin < 1e-9, "undamped W drift {worst_pin:.3e}");

    pass(
        "dephasing closed forms",
        format!(
            "RK4 residual {worst:.3e} < 1e-6 over the rate/coupling grid; \
             W < 0.01 kappa past t = 12/Gamma; undamped drift {worst_pin:.3e} < 1e-9"
        ),
    );
}

/// With matched rate conventions the single-excitation block of the
/// full Lindblad integration equals the reduced trajectory to 1e-6;
/// the fitted coherence-decay exponents under the two conventions are
/// reported with their factor-2 ratio.
#[test]
fn lindblad_consistency_and_rate_factor() {
    let dp_full = DephasingParams::symmetric(0.5, 1.0, RateConvention::FullLindblad).unwrap();
    let d = effective_coupling(&BASE, &dp_full);
    let lindblad =
        integrate_lindblad(&DensityMatrix::basis_state(2), &BASE, &dp_full, 20.0, 8001).unwrap();
    let reduced =
        integrate_subspace(&SubspaceState::charger_excited(), &d, &dp_full, 20.0, 8001).unwrap();
    let mut worst: f64 = 0.0;
    for (state, s) in lindblad.states.iter().zip(&reduced.states) {
        worst = worst.max((state.matrix()[(2, 2)].re - s.u).abs());
        worst = worst.max((state.matrix()[(2, 1)].norm() - s.v.norm()).abs());
    }
    assert!(worst < 1e-6, "block residual {worst:.3e}");

    // Decay-rate fits: sigma_z dissipator vs the reduced-form damping.
    let long =
        integrate_lindblad(&DensityMatrix::basis_state(2), &BASE, &dp_full, 40.0, 16001).unwrap();
    let mags: Vec<f64> = long.states.iter().map(|s| s.matrix()[(2, 1)].norm()).collect();
    let dissipator_rate = fit_peak_decay_rate(&long.times, &mags).unwrap();

    let dp_paper = DephasingParams::symmetric(0.5, 1.0, RateConvention::PaperSubspace).unwrap();
    let reduced_long =
        integrate_subspace(&SubspaceState::charger_excited(), &d, &dp_paper, 40.0, 16001).unwrap();
    let sub_mags: Vec<f64> = reduced_long.states.iter().map(|s| s.v.norm()).collect();
    let reduced_rate = fit_peak_decay_rate(&reduced_long.times, &sub_mags).unwrap();

    let factor = dissipator_rate / reduced_rate;
    assert!((factor - 2.0).abs() < 0.05, "rate factor {factor}");

    pass(
        "lindblad consistency",
        format!(
            "block residual {worst:.3e} < 1e-6; fitted coherence decay \
             {dissipator_rate:.4} (sigma_z dissipator) vs {reduced_rate:.4} (reduced \
             equations), factor {factor:.3}: the documented factor-2 convention gap"
        ),
    );
}

/// Two binary invocations of the same shipped preset produce
/// byte-identical CSVs, independent of the worker count.
#[test]
fn shipped_configs_are_deterministic() {
    let exe = env!("CARGO_BIN_EXE_qbattery");
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let base = std::env::temp_dir().join(format!("qbattery-determinism-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&base);

    for preset in ["fig1", "fig6"] {
        let config = manifest.join("presets").join(format!("{preset}.cfg"));
        let out_a = base.join(format!("{preset}-a"));
        let out_b = base.join(format!("{preset}-b"));
        for (out, threads) in [(&out_a, None), (&out_b, Some("1"))] {
            let mut cmd = Command::new(exe);
            cmd.arg("sweep")
                .arg("--config")
                .arg(&config)
                .arg("--out")
                .arg(out);
            if let Some(n) = threads {
                cmd.env("QB_THREADS", n);
            }
            let status = cmd.status().expect("binary runs");
            assert!(status.success(), "sweep failed for {preset}");
        }
        let mut names: Vec<String> = std::fs::read_dir(&out_a)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.ends_with(".csv"))
            .collect();
        names.sort();
        assert!(names.len() >= 5, "expected per-value files plus summary");
        for name in &names {
            let a = std::fs::read(out_a.join(name)).unwrap();
            let b = std::fs::read(out_b.join(name)).unwrap();
            assert_eq!(a, b, "{preset}/{name} differs between invocations");
        }
    }
    let _ = std::fs::remove_dir_all(&base);
    pass(
        "determinism",
        "fig1 and fig6 presets byte-identical across invocations and worker counts".into(),
    );
}
