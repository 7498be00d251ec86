//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the library and its validation
//! checks lives here, so the whole crate can be recalibrated from one
//! place. Two baseline scales cover most uses: `ALGEBRAIC` for
//! identities that hold to rounding error and `STRUCTURAL` for
//! decomposition residuals that accumulate a few digits.

/// Identities exact up to floating-point rounding (unitarity, trace
/// normalization, closed-form element comparisons).
pub const ALGEBRAIC: f64 = 1e-12;

/// Decomposition residuals and symmetry checks (eigen residuals,
/// orthonormality, Hermiticity of inputs).
pub const STRUCTURAL: f64 = 1e-10;

/// Density-matrix eigenvalues may dip this far below zero before the
/// state is rejected as unphysical.
pub const PSD_FLOOR: f64 = 1e-10;

/// Agreement between closed-form dephasing solutions and fixed-step
/// RK4 integration of the subspace equations.
pub const ODE_ORACLE: f64 = 1e-6;

/// Agreement between analytic instantaneous power and a central
/// finite difference of the stored work.
pub const POWER_FD: f64 = 1e-6;

/// Step used by the central finite difference in power checks.
pub const POWER_FD_STEP: f64 = 1e-4;

/// Slack allowed on the 2x2 subspace physicality bound
/// |v| <= sqrt(u(1-u)) during integration.
pub const SUBSPACE_PHYSICALITY: f64 = 1e-8;

/// Trace/Hermiticity drift allowed over a full Lindblad integration.
pub const LINDBLAD_DRIFT: f64 = 1e-8;

/// Jacobi eigensolver: off-diagonal norm (relative to the Frobenius
/// norm) at which the sweep loop stops.
pub const JACOBI_CONVERGENCE: f64 = 1e-15;

/// Jacobi eigensolver: hard cap on cyclic sweeps. Converges in ~5 for
/// 4x4 inputs; the cap only guards against non-numeric input.
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues closer than this (relative to the spectral scale) are
/// treated as one degenerate cluster when fixing eigenvector gauge.
pub const DEGENERACY_GAP: f64 = 1e-8;
