//! Dense complex matrices sized for one- and two-qubit work, a cyclic
//! Jacobi eigensolver for Hermitian matrices, and density matrices that
//! are validated on construction.

use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

use crate::tol;

/// Errors from matrix construction, validation, and decomposition.
#[derive(Debug, Error)]
pub enum QmatError {
    #[error("matrix dimension must be positive")]
    ZeroDim,
    #[error("expected {expected} entries for the given dimension, got {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("hermiticity violation: max |m - m†| entry = {residual:.3e}")]
    HermiticityViolation { residual: f64 },
    #[error("trace violation: |tr - 1| = {residual:.3e}")]
    TraceViolation { residual: f64 },
    #[error("positivity violation: smallest eigenvalue = {min_eigenvalue:.3e}")]
    PositivityViolation { min_eigenvalue: f64 },
    #[error("eigensolver stalled: off-diagonal norm {off_norm:.3e} after {sweeps} sweeps")]
    NonConvergence { off_norm: f64, sweeps: usize },
}

/// Square complex matrix in row-major storage. Every constructor and
/// mutator rejects non-finite entries, so a held matrix never contains
/// NaN or infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a dim x dim matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, QmatError> {
        if dim == 0 {
            return Err(QmatError::ZeroDim);
        }
        if entries.len() != dim * dim {
            return Err(QmatError::EntryCount {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        for (i, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(QmatError::NonFiniteEntry {
                    row: i / dim,
                    col: i % dim,
                });
            }
        }
        Ok(ComplexMatrix { dim, entries })
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(
        dim: usize,
        f: impl Fn(usize, usize) -> Complex64,
    ) -> Result<Self, QmatError> {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        ComplexMatrix::new(dim, entries)
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self, QmatError> {
        ComplexMatrix::new(
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// All-zero matrix.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Writes one entry; non-finite values are a caller bug.
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(
            value.re.is_finite() && value.im.is_finite(),
            "non-finite entry at ({row}, {col})"
        );
        self.entries[row * self.dim + col] = value;
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, QmatError> {
        if self.dim != other.dim {
            return Err(QmatError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self[(r, k)] * other[(k, c)];
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, self[(c, r)].conj());
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, self[(r, c)].conj());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`. The first factor is the qubit held
    /// by Alice throughout this crate, so basis order is |00>, |01>, |10>,
    /// |11> with Alice's bit on the left.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim, other.dim);
        let mut out = ComplexMatrix::zeros(n * m);
        for ar in 0..n {
            for ac in 0..n {
                let a = self[(ar, ac)];
                for br in 0..m {
                    for bc in 0..m {
                        out.set(ar * m + br, ac * m + bc, a * other[(br, bc)]);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Entrywise sum; dimensions must match.
    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let mut out = self.clone();
        for i in 0..self.entries.len() {
            out.entries[i] += other.entries[i];
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= factor;
        }
        assert!(
            out.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "non-finite entry after scaling"
        );
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference |self - other|.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Frobenius norm of the off-diagonal part.
    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    acc += self[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations
    /// with complex phase, eigenvalues sorted in descending order. Input
    /// beyond the Hermiticity tolerance is rejected rather than silently
    /// symmetrized.
    pub fn hermitian_eigen(&self) -> Result<EigenDecomposition, QmatError> {
        let residual = self.hermiticity_residual();
        if residual > tol::HERMITICITY {
            return Err(QmatError::HermiticityViolation { residual });
        }
        let n = self.dim;
        // Average away sub-tolerance asymmetry so the rotations act on an
        // exactly Hermitian matrix.
        let mut a = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let v = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
                a.set(r, c, v);
            }
        }
        for i in 0..n {
            let d = a[(i, i)];
            a.set(i, i, Complex64::new(d.re, 0.0));
        }
        let mut v = ComplexMatrix::identity(n);
        let mut sweeps = 0;
        let mut off = a.off_diagonal_norm();
        while off >= tol::JACOBI_OFF_NORM {
            if sweeps == tol::JACOBI_MAX_SWEEPS {
                return Err(QmatError::NonConvergence {
                    off_norm: off,
                    sweeps,
                });
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
            sweeps += 1;
            off = a.off_diagonal_norm();
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a[(j, j)]
                .re
                .partial_cmp(&a[(i, i)].re)
                .expect("diagonal is finite")
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut eigenvectors = ComplexMatrix::zeros(n);
        for (newcol, &oldcol) in order.iter().enumerate() {
            for r in 0..n {
                eigenvectors.set(r, newcol, v[(r, oldcol)]);
            }
        }
        Ok(EigenDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }
}

/// One Jacobi rotation zeroing the (p, q) entry of Hermitian `a`, with the
/// same rotation accumulated into `v` (columns of `v` stay the running
/// eigenvector estimates).
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // Classic Jacobi angle from the 2x2 block, extended to complex entries
    // by factoring out the phase of a[p][q].
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phase = apq / mag;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a.set(k, p, akp * c - akq * phase.conj() * s);
        a.set(k, q, akp * phase * s + akq * c);
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a.set(p, k, apk * c - aqk * phase * s);
        a.set(q, k, apk * phase.conj() * s + aqk * c);
    }
    // The rotation annihilates these entries analytically; store the exact
    // zeros and keep the diagonal real.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let dpp = a[(p, p)];
    a.set(p, p, Complex64::new(dpp.re, 0.0));
    let dqq = a[(q, q)];
    a.set(q, q, Complex64::new(dqq.re, 0.0));

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v.set(k, p, vkp * c - vkq * phase.conj() * s);
        v.set(k, q, vkp * phase * s + vkq * c);
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.entries[row * self.dim + col]
    }
}

impl fmt::Display for ComplexMatrix {
    /// Fixed six-decimal grid, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            write!(f, "[")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                if c > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:9.6}{:+9.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Result of a Hermitian eigendecomposition: real eigenvalues in
/// descending order and a unitary whose j-th column is the j-th
/// eigenvector.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds sum_j f(lambda_j) v_j v_j†. With `f = identity` this
    /// reconstructs the original matrix; with `f = sqrt` it gives the
    /// positive-semidefinite square root.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                for c in 0..n {
                    let add = self.eigenvectors[(r, j)]
                        * self.eigenvectors[(c, j)].conj()
                        * w;
                    let cur = out[(r, c)];
                    out.set(r, c, cur + add);
                }
            }
        }
        out
    }

    /// sum_j lambda_j v_j v_j†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|l| l)
    }
}

/// A matrix validated as a quantum state: Hermitian within tolerance,
/// unit trace, and no eigenvalue below the positivity floor. Sub-tolerance
/// defects are kept as-is, not repaired.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a candidate state. Checks run in order:
    /// hermiticity, trace, positivity, each reporting the violation size.
    pub fn new(mat: ComplexMatrix) -> Result<Self, QmatError> {
        let residual = mat.hermiticity_residual();
        if residual > tol::HERMITICITY {
            return Err(QmatError::HermiticityViolation { residual });
        }
        let tr = mat.trace();
        let trace_residual = (tr - Complex64::new(1.0, 0.0)).norm();
        if trace_residual > tol::TRACE {
            return Err(QmatError::TraceViolation {
                residual: trace_residual,
            });
        }
        let eig = mat.hermitian_eigen()?;
        let min_eigenvalue = *eig
            .eigenvalues
            .last()
            .expect("eigenvalue list is nonempty");
        if min_eigenvalue < tol::POSITIVITY_FLOOR {
            return Err(QmatError::PositivityViolation { min_eigenvalue });
        }
        Ok(DensityMatrix { mat })
    }

    /// Projector |psi><psi| onto a pure state given by its amplitudes.
    /// The amplitude vector is normalized first; an all-zero vector is a
    /// caller bug.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self, QmatError> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        assert!(
            norm_sqr > 0.0 && norm_sqr.is_finite(),
            "pure-state amplitudes must have positive finite norm"
        );
        let norm = norm_sqr.sqrt();
        let psi: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        let dim = psi.len();
        let mat = ComplexMatrix::from_fn(dim, |r, c| psi[r] * psi[c].conj())?;
        DensityMatrix::new(mat)
    }

    /// I / dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        DensityMatrix::new(m).expect("maximally mixed state is valid")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}
