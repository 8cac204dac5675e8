//! Shared helpers for the integration suites. Pipelines here are built
//! directly from channel primitives so the suites exercise a route
//! independent of the scenario runner where that matters.

#![allow(dead_code)]

use num_complex::Complex64;
use qdamp::channels::{adc, DampingStrength, QubitSite};
use qdamp::qmat::{ComplexMatrix, DensityMatrix};
use qdamp::scenarios::{bell, BellKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn strength(p: f64) -> DampingStrength {
    DampingStrength::new(p).expect("probability in range")
}

/// Bell source with the transmitted qubit damped at p_b.
pub fn one_damped(kind: BellKind, pb: f64) -> DensityMatrix {
    let chan = adc(strength(pb))
        .extend_to_site(QubitSite::B)
        .expect("single-qubit channel");
    chan.apply(&bell(kind)).expect("valid output")
}

/// Bell source with the transmitted qubit damped at p_b, then Alice's
/// qubit damped at p_a.
pub fn two_damped(kind: BellKind, pa: f64, pb: f64) -> DensityMatrix {
    let chan = adc(strength(pa))
        .extend_to_site(QubitSite::A)
        .expect("single-qubit channel");
    chan.apply(&one_damped(kind, pb)).expect("valid output")
}

/// Random pure two-qubit state, amplitudes uniform on the complex unit
/// square then normalized.
pub fn random_pure(rng: &mut ChaCha8Rng) -> DensityMatrix {
    loop {
        let amps: Vec<Complex64> = (0..4)
            .map(|_| {
                Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
            })
            .collect();
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm > 1e-3 {
            return DensityMatrix::from_pure(&amps).expect("normalized pure state");
        }
    }
}

/// Random mixed two-qubit state: convex mixture of up to three pure
/// states.
pub fn random_density(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let terms = rng.gen_range(1..=3);
    let mut weights = Vec::with_capacity(terms);
    for _ in 0..terms {
        weights.push(rng.gen::<f64>() + 1e-3);
    }
    let total: f64 = weights.iter().sum();
    let mut acc = ComplexMatrix::zeros(4);
    for w in weights {
        let pure = random_pure(rng);
        acc = acc.add(&pure.matrix().scale(Complex64::new(w / total, 0.0)));
    }
    DensityMatrix::new(acc).expect("convex mixture is a valid state")
}

/// Random single-qubit unitary: SU(2) from three angles times a global
/// phase.
pub fn random_unitary(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let tau = std::f64::consts::TAU;
    let alpha = rng.gen::<f64>() * tau;
    let psi = rng.gen::<f64>() * tau;
    let chi = rng.gen::<f64>() * tau;
    let phi = rng.gen::<f64>().sqrt().asin();
    let (sp, cp) = phi.sin_cos();
    let g = Complex64::from_polar(1.0, alpha);
    ComplexMatrix::new(
        2,
        vec![
            g * Complex64::from_polar(cp, psi),
            g * Complex64::from_polar(sp, chi),
            -g * Complex64::from_polar(sp, -chi),
            g * Complex64::from_polar(cp, -psi),
        ],
    )
    .expect("finite entries")
}

/// (u ⊗ v) rho (u ⊗ v)†.
pub fn conjugate_by_locals(
    rho: &DensityMatrix,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
) -> DensityMatrix {
    let w = u.tensor(v);
    let m = w
        .matmul(rho.matrix())
        .and_then(|m| m.matmul(&w.adjoint()))
        .expect("dimensions match");
    DensityMatrix::new(m).expect("unitary conjugation preserves validity")
}

/// Closed-form concurrence for X-shaped states (nonzero entries only on
/// the diagonal and antidiagonal): an independent check on the spectral
/// route. C = 2 max(0, |r03| - sqrt(r11 r22), |r12| - sqrt(r00 r33)).
pub fn x_state_concurrence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let diag = |i: usize| m[(i, i)].re.max(0.0);
    let a = m[(0, 3)].norm() - (diag(1) * diag(2)).sqrt();
    let b = m[(1, 2)].norm() - (diag(0) * diag(3)).sqrt();
    2.0 * a.max(b).max(0.0)
}
