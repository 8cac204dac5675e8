//! Fully entangled fraction, teleportation fidelity, closed-form fidelity
//! curves for damped Bell pairs, the improvement bound for repairing a
//! damped pair, and Wootters concurrence.
//!
//! The fully entangled fraction (FEF) of a two-qubit state rho is
//! f(rho) = max <e|rho|e> over all maximally entangled |e>. A state
//! teleports better than any classical strategy exactly when f > 1/2, and
//! the optimal teleportation fidelity is F = (2 f + 1) / 3.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::channels::DampingStrength;
use crate::qmat::{ComplexMatrix, DensityMatrix, QmatError};
use crate::tol;

/// Errors from fidelity computations.
#[derive(Debug, Error)]
pub enum FidelityError {
    #[error("expected a two-qubit state (dimension 4), got dimension {found}")]
    NotTwoQubit { found: usize },
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("fully entangled fraction must lie in [0, 1], got {value}")]
    OutOfRange { value: f64 },
    #[error("improvement bound is undefined at p_b = 1/2")]
    UndefinedAtHalf,
    #[error("no repair by further damping below p_b = 3/4, got p_b = {pb}")]
    NoImprovementPossible { pb: f64 },
    #[error(transparent)]
    Matrix(#[from] QmatError),
}

/// Fully entangled fraction, a number in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Fef(f64);

impl Fef {
    pub fn new(value: f64) -> Result<Self, FidelityError> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(FidelityError::OutOfRange { value });
        }
        Ok(Fef(value))
    }

    /// Wraps a spectral or sampled estimate, clamping the at-most-1-ulp
    /// excursions outside [0, 1] that rounding can produce.
    fn from_estimate(value: f64) -> Self {
        Fef(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Where a state sits relative to the f = 1/2 teleportation threshold,
/// with a guard band so values numerically on the threshold are reported
/// as such instead of being forced to a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TeleportClass {
    /// f > 1/2: beats every classical strategy.
    Teleporting,
    /// f within the guard band of 1/2.
    Boundary,
    /// f < 1/2: no better than classical.
    NonTeleporting,
}

/// Full fidelity analysis of one state.
#[derive(Clone, Debug)]
pub struct FefReport {
    /// FEF from the spectral computation.
    pub fef: Fef,
    /// Closed-form reference, when the caller has one.
    pub fef_closed: Option<Fef>,
    /// |spectral - closed| when a reference was given.
    pub closed_gap: Option<f64>,
    /// Optimal teleportation fidelity (2 f + 1) / 3.
    pub teleport_fidelity: f64,
    /// Classification against f = 1/2 with a guard band.
    pub class: TeleportClass,
    /// f > 1/2 strictly (guard-banded); the state is useful for
    /// teleportation.
    pub is_teleporting: bool,
    /// f > 1/2 also guarantees distillability by the standard protocols,
    /// so this mirrors `is_teleporting`.
    pub directly_distillable: bool,
}

/// Unitary basis change whose columns are the magic basis
/// (Phi+, i Phi-, i Psi+, Psi-). In this basis Re(B† rho B) is the real
/// symmetric matrix whose largest eigenvalue is the FEF.
fn magic_basis() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    ComplexMatrix::new(
        4,
        vec![
            re(s), im(s), z, z,
            z, z, im(s), re(s),
            z, z, im(s), re(-s),
            re(s), im(-s), z, z,
        ],
    )
    .expect("finite entries")
}

/// FEF by the spectral route: the maximum over maximally entangled states
/// equals the largest eigenvalue of the real part of rho expressed in the
/// magic basis.
pub fn fef_numeric(rho: &DensityMatrix) -> Result<Fef, FidelityError> {
    if rho.dim() != 4 {
        return Err(FidelityError::NotTwoQubit { found: rho.dim() });
    }
    let b = magic_basis();
    let m = b.adjoint().matmul(rho.matrix())?.matmul(&b)?;
    // Real part, symmetrized so the eigensolver sees an exactly real
    // symmetric matrix.
    let real = ComplexMatrix::from_fn(4, |r, c| {
        Complex64::new(0.5 * (m[(r, c)].re + m[(c, r)].re), 0.0)
    })?;
    let eig = real.hermitian_eigen()?;
    Ok(Fef::from_estimate(eig.eigenvalues[0]))
}

/// FEF lower bound by seeded random search: sample maximally entangled
/// states (U ⊗ I)|Phi+> with U drawn Haar-uniformly from U(2) and keep the
/// best overlap. Converges to the spectral value from below as `samples`
/// grows.
pub fn fef_oracle(
    rho: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<Fef, FidelityError> {
    if rho.dim() != 4 {
        return Err(FidelityError::NotTwoQubit { found: rho.dim() });
    }
    if samples == 0 {
        return Err(FidelityError::ZeroSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rho.matrix();
    let mut best = 0.0f64;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..samples {
        // Haar measure on U(2): three uniform angles plus phi = asin(sqrt(xi)).
        let alpha = rng.gen::<f64>() * TAU;
        let psi_angle = rng.gen::<f64>() * TAU;
        let chi = rng.gen::<f64>() * TAU;
        let phi = rng.gen::<f64>().sqrt().asin();
        let (sp, cp) = phi.sin_cos();
        let global = Complex64::from_polar(1.0, alpha);
        let u00 = global * Complex64::from_polar(cp, psi_angle);
        let u01 = global * Complex64::from_polar(sp, chi);
        let u10 = -global * Complex64::from_polar(sp, -chi);
        let u11 = global * Complex64::from_polar(cp, -psi_angle);
        // (U ⊗ I)|Phi+> has amplitudes (u00, u01, u10, u11) / sqrt(2).
        let e = [u00 * s, u01 * s, u10 * s, u11 * s];
        let mut val = Complex64::new(0.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                val += e[r].conj() * m[(r, c)] * e[c];
            }
        }
        best = best.max(val.re);
    }
    Ok(Fef::from_estimate(best))
}

/// FEF of a Bell pair whose transmitted qubit was damped with strength p:
/// (1 + sqrt(1 - p))^2 / 4. The same curve holds for all four Bell sources.
pub fn fef_one_damped(p: DampingStrength) -> Fef {
    let r = (1.0 - p.value()).sqrt();
    Fef::from_estimate((1.0 + r) * (1.0 + r) / 4.0)
}

/// FEF of a Phi-type pair with both qubits damped at equal strength p:
/// 1 - p + p^2 / 2.
pub fn fef_two_damped_phi_equal(p: DampingStrength) -> Fef {
    let p = p.value();
    Fef::from_estimate(1.0 - p + p * p / 2.0)
}

/// FEF of a Psi-type pair with both qubits damped at equal strength p:
/// max(1 - p, p / 2).
pub fn fef_two_damped_psi_equal(p: DampingStrength) -> Fef {
    let p = p.value();
    Fef::from_estimate((1.0 - p).max(p / 2.0))
}

/// FEF of a Phi-type pair damped with strength p_a on Alice's qubit and
/// p_b on the transmitted qubit:
/// [p_a p_b + (1 + sqrt((1 - p_a)(1 - p_b)))^2] / 4.
pub fn fef_two_damped_phi(pa: DampingStrength, pb: DampingStrength) -> Fef {
    let (pa, pb) = (pa.value(), pb.value());
    let root = ((1.0 - pa) * (1.0 - pb)).sqrt();
    Fef::from_estimate((pa * pb + (1.0 + root) * (1.0 + root)) / 4.0)
}

/// FEF of a Psi-type pair damped with strengths p_a and p_b:
/// max[(p_a + p_b) / 4, (sqrt(1 - p_a) + sqrt(1 - p_b))^2 / 4].
pub fn fef_two_damped_psi(pa: DampingStrength, pb: DampingStrength) -> Fef {
    let (pa, pb) = (pa.value(), pb.value());
    let sum_branch = (pa + pb) / 4.0;
    let root_sum = (1.0 - pa).sqrt() + (1.0 - pb).sqrt();
    let coherent_branch = root_sum * root_sum / 4.0;
    Fef::from_estimate(sum_branch.max(coherent_branch))
}

/// Optimal teleportation fidelity reachable with a state of FEF f:
/// F = (2 f + 1) / 3.
pub fn teleportation_fidelity(f: Fef) -> f64 {
    (2.0 * f.value() + 1.0) / 3.0
}

/// Damping strength on Alice's qubit below which a Phi-type pair with the
/// transmitted qubit damped at p_b is guaranteed to improve:
/// g(p_b) = 4 [sqrt(1 - p_b)(2 p_b - 1) - (1 - p_b)] / (2 p_b - 1)^2.
/// Positive only for p_b > 3/4; undefined at p_b = 1/2. The condition
/// p_a < g(p_b) is sufficient for improvement, not necessary: beyond
/// p_b = sqrt(3)/2 every p_a > 0 improves even though g has fallen below 1.
pub fn improvement_bound_g(pb: DampingStrength) -> Result<f64, FidelityError> {
    let p = pb.value();
    let d = 2.0 * p - 1.0;
    if d == 0.0 {
        return Err(FidelityError::UndefinedAtHalf);
    }
    let q = 1.0 - p;
    Ok(4.0 * (q.sqrt() * d - q) / (d * d))
}

/// Exact (necessary and sufficient) improvement test for a Phi-type pair:
/// damping Alice's qubit at p_a raises the FEF over the one-damped value
/// if and only if p_a > 0 and (1 + sqrt(1 - p_a))(2 p_b - 1) > 2 sqrt(1 - p_b).
pub fn improves_phi(pa: DampingStrength, pb: DampingStrength) -> bool {
    let (pa, pb) = (pa.value(), pb.value());
    pa > 0.0 && (1.0 + (1.0 - pa).sqrt()) * (2.0 * pb - 1.0) > 2.0 * (1.0 - pb).sqrt()
}

/// The p_a that maximizes the repaired FEF of a Phi-type pair:
/// p_a* = p_b (4 p_b - 3) / (2 p_b - 1)^2, defined for p_b >= 3/4.
pub fn optimal_pa(pb: DampingStrength) -> Result<DampingStrength, FidelityError> {
    let p = pb.value();
    if p < 0.75 {
        return Err(FidelityError::NoImprovementPossible { pb: p });
    }
    let d = 2.0 * p - 1.0;
    let pa = p * (4.0 * p - 3.0) / (d * d);
    Ok(DampingStrength::new(pa).expect("optimal p_a lies in [0, 1] for p_b in [3/4, 1]"))
}

/// The FEF reached at the optimal repair point:
/// f_max = p_b^2 / (2 (2 p_b - 1)), defined for p_b >= 3/4. Strictly above
/// 1/2 for p_b in [3/4, 1); exactly 1/2 at p_b = 1.
pub fn fef_max_after_repair(pb: DampingStrength) -> Result<Fef, FidelityError> {
    let p = pb.value();
    if p < 0.75 {
        return Err(FidelityError::NoImprovementPossible { pb: p });
    }
    Ok(Fef::from_estimate(p * p / (2.0 * (2.0 * p - 1.0))))
}

/// Damping strength at which the equal-damping Phi curve 1 - p + p^2/2
/// crosses the one-damped curve (1 + sqrt(1 - p))^2 / 4, found by
/// bisection on [1/2, 1]. Above this point a pair with both qubits damped
/// outperforms a pair with only the transmitted qubit damped.
pub fn crossover_equal_damping() -> f64 {
    let h = |p: f64| {
        let s = DampingStrength::new(p).expect("bisection stays in [0, 1]");
        fef_two_damped_phi_equal(s).value() - fef_one_damped(s).value()
    };
    let mut lo = 0.5;
    let mut hi = 1.0;
    let (flo, fhi) = (h(lo), h(hi));
    assert!(
        flo < 0.0 && fhi > 0.0,
        "curves must straddle zero on [1/2, 1]"
    );
    while hi - lo > tol::BISECTION {
        let mid = 0.5 * (lo + hi);
        let fm = h(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Wootters concurrence of a two-qubit state, via the Hermitian form:
/// C = max(0, l1 - l2 - l3 - l4) where l_i are the descending square roots
/// of the eigenvalues of sqrt(rho) rho~ sqrt(rho) and
/// rho~ = (sy ⊗ sy) rho* (sy ⊗ sy).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, FidelityError> {
    if rho.dim() != 4 {
        return Err(FidelityError::NotTwoQubit { found: rho.dim() });
    }
    let eig = rho.matrix().hermitian_eigen()?;
    let sqrt_rho = eig.map_eigenvalues(|l| l.max(0.0).sqrt());
    // sy ⊗ sy is real: antidiagonal (-1, 1, 1, -1).
    let yy = ComplexMatrix::from_real(
        4,
        &[
            0.0, 0.0, 0.0, -1.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            -1.0, 0.0, 0.0, 0.0,
        ],
    )?;
    let spin_flipped = yy.matmul(&rho.matrix().conjugate())?.matmul(&yy)?;
    let r = sqrt_rho.matmul(&spin_flipped)?.matmul(&sqrt_rho)?;
    let lambdas = r.hermitian_eigen()?;
    let roots: Vec<f64> = lambdas
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Classifies f against the teleportation threshold with a guard band.
fn classify(f: Fef) -> TeleportClass {
    let gap = f.value() - 0.5;
    if gap > tol::STRICT_GUARD {
        TeleportClass::Teleporting
    } else if gap < -tol::STRICT_GUARD {
        TeleportClass::NonTeleporting
    } else {
        TeleportClass::Boundary
    }
}

/// Computes the spectral FEF of a state and bundles it with the derived
/// teleportation quantities, optionally comparing against a closed-form
/// reference.
pub fn analyze(
    rho: &DensityMatrix,
    closed_form: Option<Fef>,
) -> Result<FefReport, FidelityError> {
    let fef = fef_numeric(rho)?;
    let class = classify(fef);
    let useful = class == TeleportClass::Teleporting;
    Ok(FefReport {
        fef,
        fef_closed: closed_form,
        closed_gap: closed_form.map(|c| (fef.value() - c.value()).abs()),
        teleport_fidelity: teleportation_fidelity(fef),
        class,
        is_teleporting: useful,
        directly_distillable: useful,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{adc, QubitSite};
    use crate::scenarios::{bell, BellKind};

    fn strength(p: f64) -> DampingStrength {
        DampingStrength::new(p).unwrap()
    }

    fn threshold_p() -> f64 {
        2.0 * 2.0f64.sqrt() - 2.0
    }

    #[test]
    fn bell_states_have_unit_fef() {
        for kind in BellKind::ALL {
            let f = fef_numeric(&bell(kind)).unwrap();
            assert!(
                (f.value() - 1.0).abs() < 1e-9,
                "{kind} gave {}",
                f.value()
            );
        }
    }

    #[test]
    fn maximally_mixed_has_quarter_fef() {
        let rho = DensityMatrix::maximally_mixed(4);
        let f = fef_numeric(&rho).unwrap();
        assert!((f.value() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn product_state_has_half_fef() {
        // |00><00| overlaps any maximally entangled state at exactly 1/2.
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(1.0, 0.0);
        let rho = DensityMatrix::from_pure(&amps).unwrap();
        let f = fef_numeric(&rho).unwrap();
        assert!((f.value() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn fef_rejects_single_qubit_state() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            fef_numeric(&rho),
            Err(FidelityError::NotTwoQubit { found: 2 })
        ));
    }

    #[test]
    fn one_damped_closed_form_at_half() {
        let f = fef_one_damped(strength(0.5));
        assert!((f.value() - 0.7285533905932737).abs() < 1e-12);
    }

    #[test]
    fn one_damped_fidelity_half_at_threshold() {
        let f = fef_one_damped(strength(threshold_p()));
        assert!((f.value() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn psi_equal_branches_cross_at_two_thirds() {
        let f = fef_two_damped_psi_equal(strength(2.0 / 3.0));
        assert!((f.value() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn equal_damping_specializations_agree() {
        for i in 0..=100 {
            let p = strength(i as f64 / 100.0);
            let phi = (fef_two_damped_phi(p, p).value()
                - fef_two_damped_phi_equal(p).value())
            .abs();
            let psi = (fef_two_damped_psi(p, p).value()
                - fef_two_damped_psi_equal(p).value())
            .abs();
            assert!(phi < 1e-12 && psi < 1e-12, "mismatch at p = {}", p.value());
        }
    }

    #[test]
    fn teleportation_fidelity_endpoints() {
        assert!((teleportation_fidelity(Fef::new(1.0).unwrap()) - 1.0).abs() < 1e-15);
        assert!(
            (teleportation_fidelity(Fef::new(0.5).unwrap()) - 2.0 / 3.0).abs() < 1e-15
        );
    }

    #[test]
    fn improvement_bound_values() {
        assert!((improvement_bound_g(strength(0.75)).unwrap()).abs() < 1e-12);
        assert!(
            (improvement_bound_g(strength(0.9)).unwrap() - 0.9561388300841895).abs()
                < 1e-12
        );
        assert!((improvement_bound_g(strength(1.0)).unwrap()).abs() < 1e-12);
        // Below 3/4 the formula goes negative: no p_a can satisfy p_a < g.
        assert!(improvement_bound_g(strength(0.6)).unwrap() < 0.0);
    }

    #[test]
    fn improvement_bound_undefined_at_half() {
        assert!(matches!(
            improvement_bound_g(strength(0.5)),
            Err(FidelityError::UndefinedAtHalf)
        ));
    }

    #[test]
    fn improvement_below_bound_improves() {
        for &pb in &[0.8, 0.9, 0.95] {
            let g = improvement_bound_g(strength(pb)).unwrap();
            for frac in [0.25, 0.5, 0.75] {
                let pa = g * frac;
                let repaired = fef_two_damped_phi(strength(pa), strength(pb));
                let parent = fef_one_damped(strength(pb));
                assert!(
                    repaired.value() > parent.value(),
                    "no improvement at pb = {pb}, pa = {pa}"
                );
                assert!(improves_phi(strength(pa), strength(pb)));
            }
        }
    }

    #[test]
    fn exact_improvement_test_matches_closed_forms() {
        for i in 0..=200 {
            for j in 0..=200 {
                let pa = i as f64 / 200.0;
                let pb = j as f64 / 200.0;
                let lhs = fef_two_damped_phi(strength(pa), strength(pb)).value();
                let rhs = fef_one_damped(strength(pb)).value();
                let predicted = improves_phi(strength(pa), strength(pb));
                // Skip points where the two sides are numerically tied.
                if (lhs - rhs).abs() <= 1e-12 {
                    continue;
                }
                assert_eq!(
                    predicted,
                    lhs > rhs,
                    "prediction failed at pa = {pa}, pb = {pb}"
                );
            }
        }
    }

    #[test]
    fn bound_is_tight_only_up_to_root_three_over_two() {
        // On (3/4, sqrt(3)/2) the bound is the exact boundary: crossing g
        // flips improvement. Beyond sqrt(3)/2, improvement persists for
        // every p_a, including p_a well above g.
        let tight = strength(0.8);
        let g_tight = improvement_bound_g(tight).unwrap();
        assert!(!improves_phi(strength((g_tight * 1.05).min(1.0)), tight));
        let loose = strength(0.9);
        let g_loose = improvement_bound_g(loose).unwrap();
        assert!(improves_phi(strength((g_loose * 1.05).min(1.0)), loose));
        assert!(improves_phi(strength(1.0), loose));
    }

    #[test]
    fn optimal_pa_values() {
        assert!((optimal_pa(strength(0.75)).unwrap().value()).abs() < 1e-12);
        assert!((optimal_pa(strength(0.9)).unwrap().value() - 0.84375).abs() < 1e-12);
        assert!((optimal_pa(strength(1.0)).unwrap().value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_pa_rejects_low_pb() {
        assert!(matches!(
            optimal_pa(strength(0.7)),
            Err(FidelityError::NoImprovementPossible { .. })
        ));
    }

    #[test]
    fn fef_max_values() {
        assert!(
            (fef_max_after_repair(strength(0.9)).unwrap().value() - 0.50625).abs()
                < 1e-12
        );
        assert!(
            (fef_max_after_repair(strength(1.0)).unwrap().value() - 0.5).abs() < 1e-15
        );
        // 9/16 / (2 * 1/2) = 9/16 at p_b = 3/4.
        assert!(
            (fef_max_after_repair(strength(0.75)).unwrap().value() - 0.5625).abs()
                < 1e-12
        );
    }

    #[test]
    fn optimal_point_attains_the_maximum() {
        for &pb in &[0.76, 0.8, 0.85, 0.9, 0.95, 0.99] {
            let pa = optimal_pa(strength(pb)).unwrap();
            let at_opt = fef_two_damped_phi(pa, strength(pb)).value();
            let fmax = fef_max_after_repair(strength(pb)).unwrap().value();
            assert!(
                (at_opt - fmax).abs() < 1e-12,
                "maximum mismatch at pb = {pb}"
            );
        }
    }

    #[test]
    fn crossover_location() {
        let r = crossover_equal_damping();
        assert!(r > 0.80580 && r < 0.80590, "crossover at {r}");
        // The curves really cross there.
        let below = strength(r - 1e-4);
        let above = strength(r + 1e-4);
        assert!(fef_two_damped_phi_equal(below).value() < fef_one_damped(below).value());
        assert!(fef_two_damped_phi_equal(above).value() > fef_one_damped(above).value());
    }

    #[test]
    fn spectral_fef_matches_closed_form_through_pipeline() {
        let pb = strength(0.5);
        let chan = adc(pb).extend_to_site(QubitSite::B).unwrap();
        let damped = chan.apply(&bell(BellKind::PhiPlus)).unwrap();
        let f = fef_numeric(&damped).unwrap();
        assert!((f.value() - fef_one_damped(pb).value()).abs() < 1e-12);
    }

    #[test]
    fn oracle_approaches_spectral_from_below() {
        let pb = strength(0.3);
        let chan = adc(pb).extend_to_site(QubitSite::B).unwrap();
        let damped = chan.apply(&bell(BellKind::PhiPlus)).unwrap();
        let spectral = fef_numeric(&damped).unwrap().value();
        let sampled = fef_oracle(&damped, 20_000, 42).unwrap().value();
        assert!(sampled <= spectral + 1e-9);
        assert!(spectral - sampled < 5e-3, "sampled {sampled} vs {spectral}");
    }

    #[test]
    fn oracle_is_deterministic_for_fixed_seed() {
        let rho = DensityMatrix::maximally_mixed(4);
        let a = fef_oracle(&rho, 1000, 7).unwrap();
        let b = fef_oracle(&rho, 1000, 7).unwrap();
        assert_eq!(a.value(), b.value());
    }

    #[test]
    fn oracle_rejects_zero_samples() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            fef_oracle(&rho, 0, 1),
            Err(FidelityError::ZeroSamples)
        ));
    }

    #[test]
    fn concurrence_of_bell_states_is_one() {
        for kind in BellKind::ALL {
            let c = concurrence(&bell(kind)).unwrap();
            assert!((c - 1.0).abs() < 1e-9, "{kind} gave {c}");
        }
    }

    #[test]
    fn concurrence_of_separable_states_is_zero() {
        assert!(concurrence(&DensityMatrix::maximally_mixed(4)).unwrap() < 1e-9);
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(1.0, 0.0);
        let product = DensityMatrix::from_pure(&amps).unwrap();
        assert!(concurrence(&product).unwrap() < 1e-9);
    }

    #[test]
    fn concurrence_of_one_damped_pair_is_sqrt_one_minus_p() {
        // The analytic value is sqrt(1 - p). Square roots of the spectral
        // route's near-zero eigenvalues amplify machine-epsilon noise to
        // the 1e-8 scale, so the analytic comparison is held at 5e-7.
        for p in [0.25f64, 0.5, 0.75] {
            let want = (1.0 - p).sqrt();
            let chan = adc(strength(p)).extend_to_site(QubitSite::B).unwrap();
            let damped = chan.apply(&bell(BellKind::PhiPlus)).unwrap();
            let c = concurrence(&damped).unwrap();
            assert!((c - want).abs() < 5e-7, "p = {p}: got {c}, want {want}");
        }
    }

    #[test]
    fn analyze_reports_threshold_classification() {
        let teleporting = analyze(&bell(BellKind::PhiPlus), None).unwrap();
        assert_eq!(teleporting.class, TeleportClass::Teleporting);
        assert!(teleporting.is_teleporting && teleporting.directly_distillable);

        let mixed = analyze(&DensityMatrix::maximally_mixed(4), None).unwrap();
        assert_eq!(mixed.class, TeleportClass::NonTeleporting);
        assert!(!mixed.is_teleporting);

        // A state pinned numerically at f = 1/2 lands on the boundary.
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(1.0, 0.0);
        let product = DensityMatrix::from_pure(&amps).unwrap();
        let report = analyze(&product, None).unwrap();
        assert_eq!(report.class, TeleportClass::Boundary);
        assert!(!report.is_teleporting);
    }

    #[test]
    fn analyze_records_closed_form_gap() {
        let pb = strength(0.4);
        let chan = adc(pb).extend_to_site(QubitSite::B).unwrap();
        let damped = chan.apply(&bell(BellKind::PsiMinus)).unwrap();
        let report = analyze(&damped, Some(fef_one_damped(pb))).unwrap();
        assert!(report.closed_gap.unwrap() < 1e-12);
    }
}
