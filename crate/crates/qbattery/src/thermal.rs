//! Gibbs initial state of the battery, by two independent routes.
//!
//! [`gibbs_numeric`] exponentiates the Hamiltonian through its numeric
//! eigendecomposition; [`gibbs_closed_form`] assembles the same state
//! from the model's closed-form matrix elements. The two agreeing
//! elementwise is the module's central cross-check.

use num_complex::Complex64;

use crate::error::QbError;
use crate::model::{battery_hamiltonian, closed_form_eigenvalues, BatteryParams};
use crate::operator::{hermitian_eigen, ComplexMatrix, DensityMatrix};

/// Temperature of the initial state, with the derived inverse
/// temperature beta = 1/T (k_B = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalSpec {
    temperature: f64,
    beta: f64,
}

impl ThermalSpec {
    /// Spec at finite temperature T > 0.
    pub fn new(temperature: f64) -> Result<Self, QbError> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(QbError::config(
                "thermal.temperature",
                format!("must be a finite positive number, got {temperature}"),
            ));
        }
        Ok(ThermalSpec {
            temperature,
            beta: temperature.recip(),
        })
    }

    /// Spec from the inverse temperature; beta = 0 is the
    /// infinite-temperature limit.
    pub fn from_beta(beta: f64) -> Result<Self, QbError> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(QbError::config(
                "thermal.beta",
                format!("must be a finite non-negative number, got {beta}"),
            ));
        }
        Ok(ThermalSpec {
            temperature: beta.recip(),
            beta,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Thermal equilibrium state with its partition function and the
/// Boltzmann weights exp(-beta lambda_i), ordered by ascending energy
/// (so the weights descend for beta > 0).
#[derive(Clone, Debug)]
pub struct ThermalState {
    pub rho: DensityMatrix,
    pub partition_function: f64,
    pub populations: [f64; 4],
}

/// exp(-beta H_B) / Z through the numeric eigendecomposition.
///
/// The largest Boltzmann exponent is factored out before
/// exponentiation, so low temperatures cannot overflow the state
/// itself (the reported Z still can, at beta |lambda| beyond f64
/// range).
pub fn gibbs_numeric(p: &BatteryParams, spec: &ThermalSpec) -> Result<ThermalState, QbError> {
    let h = battery_hamiltonian(p);
    let eig = hermitian_eigen(&h)?;
    let beta = spec.beta();
    let ground = eig.eigenvalues[0];
    let shifted: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|l| (-beta * (l - ground)).exp())
        .collect();
    let norm: f64 = shifted.iter().sum();
    let rho_matrix = eig.apply(|l| Complex64::new((-beta * (l - ground)).exp() / norm, 0.0));

    let populations = std::array::from_fn(|i| (-beta * eig.eigenvalues[i]).exp());
    Ok(ThermalState {
        rho: DensityMatrix::new(rho_matrix)?,
        partition_function: norm * (-beta * ground).exp(),
        populations,
    })
}

/// The same state assembled from the closed-form matrix elements
///
/// ```text
/// rho_11 = e^(-beta Delta/6) [cosh(eta beta/2) - (B/eta) sinh(eta beta/2)]
/// rho_22 = rho_33 = e^(beta Delta/6) cosh(chi beta/6)
/// rho_44 = e^(-beta Delta/6) [cosh(eta beta/2) + (B/eta) sinh(eta beta/2)]
/// rho_14 = -(eps/eta) e^(-beta Delta/6) sinh(eta beta/2)
/// rho_23 = ((Delta - 3iD)/chi) e^(beta Delta/6) sinh(chi beta/6)
/// ```
///
/// divided by Z = 2 e^(-Delta beta/6) cosh(eta beta/2)
///             + 2 e^(Delta beta/6) cosh(chi beta/6), with structural
/// zeros everywhere else. The eta = 0 and chi = 0 limits (where the
/// orbital prefactors are 0/0 but the elements themselves vanish) are
/// taken explicitly.
pub fn gibbs_closed_form(p: &BatteryParams, spec: &ThermalSpec) -> Result<ThermalState, QbError> {
    let beta = spec.beta();
    let eta = p.eta();
    let chi = p.chi();
    let outer_scale = (-beta * p.delta / 6.0).exp();
    let inner_scale = (beta * p.delta / 6.0).exp();
    let cosh_eta = (eta * beta / 2.0).cosh();
    let sinh_eta = (eta * beta / 2.0).sinh();
    let cosh_chi = (chi * beta / 6.0).cosh();
    let sinh_chi = (chi * beta / 6.0).sinh();

    // eta = 0 forces B = eps = 0, where the sinh terms vanish faster
    // than the prefactors diverge; same for chi = 0 with Delta = D = 0.
    let field_ratio = if eta > 0.0 { p.field / eta } else { 0.0 };
    let eps_ratio = if eta > 0.0 { p.epsilon / eta } else { 0.0 };
    let inner_ratio = if chi > 0.0 {
        Complex64::new(p.delta / chi, -3.0 * p.dm / chi)
    } else {
        Complex64::ZERO
    };

    let r11 = outer_scale * (cosh_eta - field_ratio * sinh_eta);
    let r44 = outer_scale * (cosh_eta + field_ratio * sinh_eta);
    let r22 = inner_scale * cosh_chi;
    let r14 = -eps_ratio * outer_scale * sinh_eta;
    let r23 = inner_ratio * inner_scale * sinh_chi;
    let z = 2.0 * outer_scale * cosh_eta + 2.0 * inner_scale * cosh_chi;

    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(r11 / z, 0.0);
    m[(1, 1)] = Complex64::new(r22 / z, 0.0);
    m[(2, 2)] = Complex64::new(r22 / z, 0.0);
    m[(3, 3)] = Complex64::new(r44 / z, 0.0);
    m[(0, 3)] = Complex64::new(r14 / z, 0.0);
    m[(3, 0)] = Complex64::new(r14 / z, 0.0);
    m[(1, 2)] = r23 / z;
    m[(2, 1)] = (r23 / z).conj();

    let mut lambda = closed_form_eigenvalues(p);
    lambda.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let populations = std::array::from_fn(|i| (-beta * lambda[i]).exp());

    Ok(ThermalState {
        rho: DensityMatrix::new(m)?,
        partition_function: z,
        populations,
    })
}
