//! Battery and charger Hamiltonians with the closed-form spectrum.
//!
//! The battery is a pair of spin-1/2 particles coupled by a dipolar
//! tensor diag(Delta - 3 epsilon, Delta + 3 epsilon, -2 Delta), a
//! z-axis Dzyaloshinskii-Moriya vector of magnitude D, and a z-axis
//! magnetic field B. The charger drives both qubits through a sigma_x
//! field of strength Omega. All matrices use the computational basis
//! ordered (|00>, |01>, |10>, |11>), and hbar = k_B = 1.

use num_complex::Complex64;

use crate::error::QbError;
use crate::operator::ComplexMatrix;

/// Physical couplings of the battery Hamiltonian.
///
/// No sign restriction: `delta < 0` orients the spins in the x-y plane,
/// `delta > 0` along z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatteryParams {
    /// Dipolar coupling Delta.
    pub delta: f64,
    /// Dipolar coupling epsilon.
    pub epsilon: f64,
    /// Dzyaloshinskii-Moriya coupling D along z.
    pub dm: f64,
    /// Magnetic field B along z.
    pub field: f64,
}

impl BatteryParams {
    /// eta = sqrt(B^2 + epsilon^2), the outer-sector mixing scale.
    pub fn eta(&self) -> f64 {
        self.field.hypot(self.epsilon)
    }

    /// chi = sqrt(Delta^2 + 9 D^2), the single-excitation mixing scale.
    pub fn chi(&self) -> f64 {
        self.delta.hypot(3.0 * self.dm)
    }
}

/// Charging drive strength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChargerParams {
    /// Drive strength (frequency) Omega.
    pub omega: f64,
}

/// Closed-form spectrum of the battery Hamiltonian.
///
/// `eigenvalues` and `eigenvectors` follow the level labels
/// lambda_1..lambda_4 (not ascending order): levels 1 and 4 live in
/// the {|00>, |11>} sector, levels 2 and 3 in {|01>, |10>}.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eta: f64,
    pub chi: f64,
    /// (lambda_1, lambda_2, lambda_3, lambda_4).
    pub eigenvalues: [f64; 4],
    /// Unit-norm eigenvectors matching `eigenvalues`, components in
    /// the (|00>, |01>, |10>, |11>) basis.
    pub eigenvectors: [[Complex64; 4]; 4],
    /// Normalization of the |00>/|11> pair: (1 + (B +- eta)^2/eps^2)^(-1/2).
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    /// Nominal closed-form normalization constants for the
    /// single-excitation pair. Their textbook expression has a complex
    /// denominator and is not used: the stored eigenvectors are
    /// normalized numerically. Retained for reference only.
    pub lambda_norm_plus: Complex64,
    pub lambda_norm_minus: Complex64,
}

/// Battery Hamiltonian in the computational basis.
///
/// ```text
///  (Delta+3B)/6        0                  0            eps/2
///       0          -Delta/6      -Delta/6 + i D/2        0
///       0      -Delta/6 - i D/2      -Delta/6            0
///     eps/2           0                  0          (Delta-3B)/6
/// ```
pub fn battery_hamiltonian(p: &BatteryParams) -> ComplexMatrix {
    let d6 = p.delta / 6.0;
    let b2 = p.field / 2.0;
    let e2 = p.epsilon / 2.0;
    let inner = Complex64::new(-d6, p.dm / 2.0);
    let mut h = ComplexMatrix::zeros(4);
    h[(0, 0)] = Complex64::new(d6 + b2, 0.0);
    h[(3, 3)] = Complex64::new(d6 - b2, 0.0);
    h[(0, 3)] = Complex64::new(e2, 0.0);
    h[(3, 0)] = Complex64::new(e2, 0.0);
    h[(1, 1)] = Complex64::new(-d6, 0.0);
    h[(2, 2)] = Complex64::new(-d6, 0.0);
    h[(1, 2)] = inner;
    h[(2, 1)] = inner.conj();
    h
}

/// Charging Hamiltonian Omega (sigma_x (x) 1 + 1 (x) sigma_x).
pub fn charging_hamiltonian(c: &ChargerParams) -> ComplexMatrix {
    let sx = ComplexMatrix::from_rows(&[
        vec![Complex64::ZERO, Complex64::ONE],
        vec![Complex64::ONE, Complex64::ZERO],
    ]);
    let id = ComplexMatrix::identity(2);
    let sum = &ComplexMatrix::kron(&sx, &id) + &ComplexMatrix::kron(&id, &sx);
    &sum * c.omega
}

/// Closed-form eigenvalues (lambda_1..lambda_4); valid for all
/// parameters, degenerate or not.
pub fn closed_form_eigenvalues(p: &BatteryParams) -> [f64; 4] {
    let eta = p.eta();
    let chi = p.chi();
    [
        (p.delta + 3.0 * eta) / 6.0,
        (-p.delta + chi) / 6.0,
        (-p.delta - chi) / 6.0,
        (p.delta - 3.0 * eta) / 6.0,
    ]
}

/// Full closed-form spectrum with eigenvectors.
///
/// The eigenvector amplitude ratios are (B +- eta)/eps for the
/// |00>/|11> pair and +-(3iD - Delta)/chi for the |01>/|10> pair, each
/// vector normalized numerically afterwards. Degenerate parameters
/// (eps = 0 or chi = 0) make the ratios singular; callers should fall
/// back to [`crate::operator::hermitian_eigen`] in that case.
pub fn closed_form_spectrum(p: &BatteryParams) -> Result<Spectrum, QbError> {
    let eta = p.eta();
    let chi = p.chi();
    if p.epsilon == 0.0 {
        return Err(QbError::DegenerateClosedForm {
            reason: "epsilon = 0 makes the |00>/|11> amplitude ratio singular".into(),
        });
    }
    if chi == 0.0 {
        return Err(QbError::DegenerateClosedForm {
            reason: "chi = 0 (Delta = D = 0) leaves the |01>/|10> pair unresolved".into(),
        });
    }

    let eigenvalues = closed_form_eigenvalues(p);

    let outer_plus = (p.field + eta) / p.epsilon;
    let outer_minus = (p.field - eta) / p.epsilon;
    // Single-excitation ratio: |01> amplitude over |10> amplitude for
    // the upper level; the lower level flips its sign.
    let inner = Complex64::new(-p.delta, 3.0 * p.dm) / chi;

    let eigenvectors = [
        normalized([
            Complex64::new(outer_plus, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ]),
        normalized([Complex64::ZERO, inner, Complex64::ONE, Complex64::ZERO]),
        normalized([Complex64::ZERO, -inner, Complex64::ONE, Complex64::ZERO]),
        normalized([
            Complex64::new(outer_minus, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ]),
    ];

    let gamma_plus = (1.0 + outer_plus * outer_plus).sqrt().recip();
    let gamma_minus = (1.0 + outer_minus * outer_minus).sqrt().recip();

    // Nominal normalization constants of the single-excitation pair,
    // kept in their closed-form shape for reference.
    let denom = Complex64::new(-p.delta, 3.0 * p.dm);
    let d2 = p.delta * p.delta;
    let nine_d2 = 9.0 * p.dm * p.dm;
    let lambda_norm_plus = (Complex64::ONE + Complex64::new(d2 + nine_d2, 0.0) / denom)
        .sqrt()
        .finv();
    let lambda_norm_minus = (Complex64::ONE + Complex64::new(d2 - nine_d2, 0.0) / denom)
        .sqrt()
        .finv();

    Ok(Spectrum {
        eta,
        chi,
        eigenvalues,
        eigenvectors,
        gamma_plus,
        gamma_minus,
        lambda_norm_plus,
        lambda_norm_minus,
    })
}

fn normalized(mut v: [Complex64; 4]) -> [Complex64; 4] {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}
