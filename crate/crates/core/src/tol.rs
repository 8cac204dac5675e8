//! Numerical tolerances used across the crate, collected in one place so
//! every validation and test agrees on what "equal" means.

/// Max allowed entrywise residual |m - m†| for a matrix accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-12;

/// Max allowed |tr(rho) - 1| for a density matrix.
pub const TRACE: f64 = 1e-12;

/// Most negative eigenvalue tolerated in a density matrix. Rounding in the
/// eigensolver can push a true zero slightly negative; anything below this
/// floor is a real positivity violation.
pub const POSITIVITY_FLOOR: f64 = -1e-10;

/// Agreement tolerance for spectral quantities (eigenvalues, fidelities
/// obtained from them) against exact references.
pub const SPECTRAL: f64 = 1e-10;

/// Off-diagonal Frobenius norm below which the Jacobi iteration stops.
pub const JACOBI_OFF_NORM: f64 = 1e-13;

/// Hard cap on Jacobi sweeps; for 4x4 Hermitian input convergence is
/// quadratic and needs far fewer.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Max allowed entrywise residual |sum K†K - I| for a valid Kraus set.
pub const COMPLETENESS: f64 = 1e-12;

/// Guard band around strict-inequality thresholds: a value within this band
/// of the threshold is classified as "boundary" rather than either side.
pub const STRICT_GUARD: f64 = 1e-12;

/// Bracket width at which bisection terminates.
pub const BISECTION: f64 = 1e-10;
