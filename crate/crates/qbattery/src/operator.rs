//! Dense complex matrix algebra for 2x2 and 4x4 Hermitian problems.
//!
//! Everything downstream works with small fixed-size matrices, so this
//! module hand-rolls the few operations needed instead of pulling in a
//! general linear-algebra stack: products, commutators, and a cyclic
//! complex Jacobi eigensolver that doubles as the independent numeric
//! oracle for the model's closed-form spectrum.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::QbError;
use crate::tol;

/// Dense row-major complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension (2 or 4).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "supported dimensions are 2 and 4");
        ComplexMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested row arrays of (re, im) pairs; test convenience.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must be square");
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    /// Diagonal matrix from real entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Matrix trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product of two 2x2 matrices, giving a 4x4.
    pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        assert!(a.dim == 2 && b.dim == 2, "kron is defined for 2x2 factors");
        ComplexMatrix::from_fn(4, |i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference |A_ij - B_ij|.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max |M - M^dag| over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// Sum of |M_ij| over off-diagonal entries.
    pub fn offdiag_abs_sum(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self[(i, j)].norm();
                }
            }
        }
        s
    }

    fn scaled(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Complex64) -> ComplexMatrix {
        self.scaled(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scaled(Complex64::new(rhs, 0.0))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>+.4}{:>+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; eigenvectors are the matching
/// orthonormal columns of `eigenvectors`, each gauged so its
/// largest-magnitude component is real and positive.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Column `i` of the eigenvector matrix.
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.dim)
            .map(|r| self.eigenvectors[(r, i)])
            .collect()
    }

    /// Rank-one projector |v_i><v_i| onto eigenvector `i`.
    pub fn projector(&self, i: usize) -> ComplexMatrix {
        let v = self.eigenvector(i);
        ComplexMatrix::from_fn(v.len(), |r, c| v[r] * v[c].conj())
    }

    /// Assemble V f(Lambda) V^dag for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvectors.dim;
        let fv: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.eigenvectors[(i, k)] * fv[k] * self.eigenvectors[(j, k)].conj())
                .sum()
        })
    }

    /// Reassemble V Lambda V^dag; should reproduce the input matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| Complex64::new(l, 0.0))
    }
}

/// Full spectral decomposition of a Hermitian matrix by cyclic complex
/// Jacobi sweeps.
///
/// The dimension is fixed and tiny, so the quadratically convergent
/// Jacobi iteration reaches machine precision in a handful of sweeps
/// and needs no external solver. Output order and eigenvector gauge
/// are deterministic: eigenvalues ascend, degenerate clusters are
/// re-orthonormalized in index order, and each column is rotated so
/// its largest-magnitude component is real positive.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen, QbError> {
    let residual = m.hermiticity_residual();
    if residual > tol::STRUCTURAL {
        return Err(QbError::NonHermitianInput { residual });
    }
    let n = m.dim;
    // Work on the exactly Hermitian part so roundoff in the input cannot
    // leak imaginary components onto the diagonal.
    let mut a = &(m + &m.dagger()) * 0.5;
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..tol::JACOBI_MAX_SWEEPS {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a[(p, q)].norm_sqr();
                }
            }
            s.sqrt()
        };
        if off <= tol::JACOBI_CONVERGENCE * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    // Sort ascending, keeping the pre-sort column order as tiebreaker.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);

    orthonormalize_degenerate(&eigenvalues, &mut vectors);
    fix_phases(&mut vectors);

    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// One complex Jacobi rotation zeroing entry (p, q) of `a`, accumulated
/// into the eigenvector matrix `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let beta = apq.norm();
    if beta == 0.0 {
        return;
    }
    let phase = apq / beta;
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;

    // tan(theta) from the stable quadratic root: smallest rotation that
    // annihilates the pivot.
    let tau = (alpha - gamma) / (2.0 * beta);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary G: G[p][p] = c, G[p][q] = -s*phase, G[q][p] = s*conj(phase),
    // G[q][q] = c. Apply A <- G^dag A G and V <- V G.
    let n = a.dim;
    let sp = Complex64::new(s, 0.0) * phase;
    let spc = sp.conj();

    // Column update: col_p' = c col_p + s conj(phase) col_q,
    //                col_q' = -s phase col_p + c col_q.
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * c + arq * spc;
        a[(r, q)] = arp * (-sp) + arq * c;
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * c + vrq * spc;
        v[(r, q)] = vrp * (-sp) + vrq * c;
    }
    // Row update: row_p' = c row_p + s phase row_q,
    //             row_q' = -s conj(phase) row_p + c row_q.
    for col in 0..n {
        let apc = a[(p, col)];
        let aqc = a[(q, col)];
        a[(p, col)] = apc * c + aqc * sp;
        a[(q, col)] = apc * (-spc) + aqc * c;
    }
    // Clean up the pivot and diagonal roundoff.
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Gram-Schmidt in index order within each cluster of (near-)equal
/// eigenvalues, so degenerate subspaces have a deterministic basis.
fn orthonormalize_degenerate(eigenvalues: &[f64], vectors: &mut ComplexMatrix) {
    let n = eigenvalues.len();
    let scale = eigenvalues.iter().fold(1.0f64, |m, &l| m.max(l.abs()));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[end - 1]).abs() <= tol::DEGENERACY_GAP * scale
        {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt_columns(vectors, start, end);
        }
        start = end;
    }
}

fn gram_schmidt_columns(vectors: &mut ComplexMatrix, start: usize, end: usize) {
    let n = vectors.dim;
    for c in start..end {
        for prev in start..c {
            let overlap: Complex64 = (0..n)
                .map(|r| vectors[(r, prev)].conj() * vectors[(r, c)])
                .sum();
            for r in 0..n {
                let correction = vectors[(r, prev)] * overlap;
                vectors[(r, c)] -= correction;
            }
        }
        let norm: f64 = (0..n).map(|r| vectors[(r, c)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            vectors[(r, c)] /= norm;
        }
    }
}

/// Rotate each column so its largest-magnitude component (first such
/// index on ties) is real positive.
fn fix_phases(vectors: &mut ComplexMatrix) {
    let n = vectors.dim;
    for c in 0..n {
        let mut best = 0;
        let mut best_mag = 0.0;
        for r in 0..n {
            let mag = vectors[(r, c)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = r;
            }
        }
        if best_mag > 0.0 {
            let phase = vectors[(best, c)] / best_mag;
            let rot = phase.conj();
            for r in 0..n {
                vectors[(r, c)] *= rot;
            }
            // Force the anchor exactly real.
            vectors[(best, c)] = Complex64::new(vectors[(best, c)].re, 0.0);
        }
    }
}

/// Apply a scalar function to a Hermitian matrix through its
/// eigendecomposition: V f(Lambda) V^dag.
///
/// Real-valued `f` yields a Hermitian result; f(l) = exp(i theta l)
/// yields a unitary one. This is the single primitive behind both the
/// Gibbs exponential exp(-beta H) and the propagator exp(-i H t).
pub fn hermitian_function(
    m: &ComplexMatrix,
    f: impl Fn(f64) -> Complex64,
) -> Result<ComplexMatrix, QbError> {
    Ok(hermitian_eigen(m)?.apply(f))
}

/// Commutator [A, B] = AB - BA.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, QbError> {
    if a.dim != b.dim {
        return Err(QbError::DimMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// A 4x4 Hermitian, unit-trace, positive-semidefinite state.
///
/// Validated once at construction; all evolution routines re-validate
/// their outputs so trajectory states always carry these guarantees.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a 4x4 matrix as a physical state.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QbError> {
        if matrix.dim() != 4 {
            return Err(QbError::InvalidState {
                reason: format!("expected dimension 4, got {}", matrix.dim()),
            });
        }
        let herm = matrix.hermiticity_residual();
        if herm > tol::ALGEBRAIC {
            return Err(QbError::InvalidState {
                reason: format!("Hermiticity residual {herm:.3e} exceeds {:.0e}", tol::ALGEBRAIC),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::ALGEBRAIC || tr.im.abs() > tol::ALGEBRAIC {
            return Err(QbError::InvalidState {
                reason: format!("trace {tr} differs from 1"),
            });
        }
        let eig = hermitian_eigen(&matrix)?;
        if eig.eigenvalues[0] < -tol::PSD_FLOOR {
            return Err(QbError::InvalidState {
                reason: format!("negative eigenvalue {:.3e}", eig.eigenvalues[0]),
            });
        }
        Ok(DensityMatrix { matrix })
    }

    /// Pure state |psi><psi| from an (unnormalized) 4-component vector.
    pub fn from_pure(amplitudes: &[Complex64; 4]) -> Self {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let m = ComplexMatrix::from_fn(4, |i, j| {
            amplitudes[i] * amplitudes[j].conj() / norm_sqr
        });
        DensityMatrix { matrix: m }
    }

    /// Pure computational basis state |k><k|.
    pub fn basis_state(k: usize) -> Self {
        let mut amps = [Complex64::ZERO; 4];
        amps[k] = Complex64::ONE;
        Self::from_pure(&amps)
    }

    /// The maximally mixed state I/4.
    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            matrix: &ComplexMatrix::identity(4) * 0.25,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Sorted (ascending) spectrum of the state.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix)
            .expect("validated state is Hermitian")
            .eigenvalues
    }

    /// Trace distance (1/2)||rho - sigma||_1.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.matrix - &other.matrix;
        let eig = hermitian_eigen(&diff).expect("difference of Hermitian matrices");
        0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>()
    }
}
