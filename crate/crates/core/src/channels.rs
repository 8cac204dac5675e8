//! Quantum channels in Kraus form: amplitude damping on a single qubit
//! and its extension to either half of a two-qubit pair.

use num_complex::Complex64;
use thiserror::Error;

use crate::qmat::{ComplexMatrix, DensityMatrix, QmatError};
use crate::tol;

/// Errors from channel construction and application.
#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("damping strength must lie in [0, 1], got {value}")]
    InvalidDampingStrength { value: f64 },
    #[error("a channel needs at least one Kraus operator")]
    EmptyKrausSet,
    #[error("operator dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("completeness violation: max |sum K†K - I| entry = {residual:.3e}")]
    CompletenessViolation { residual: f64 },
    #[error("site extension requires single-qubit operators, got dim {found}")]
    NotSingleQubit { found: usize },
    #[error("channel produced an invalid state: {0}")]
    InvalidOutput(#[from] QmatError),
}

/// Probability-like damping parameter, guaranteed finite and in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct DampingStrength(f64);

impl DampingStrength {
    pub fn new(value: f64) -> Result<Self, ChannelError> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(ChannelError::InvalidDampingStrength { value });
        }
        Ok(DampingStrength(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for DampingStrength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which half of the pair an extended channel acts on. Site A is Alice's
/// qubit (left tensor factor), site B is the transmitted qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitSite {
    A,
    B,
}

impl std::fmt::Display for QubitSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QubitSite::A => write!(f, "A"),
            QubitSite::B => write!(f, "B"),
        }
    }
}

/// A completely positive trace-preserving map held as an explicit list of
/// Kraus operators. Zero operators are kept verbatim: the set is the
/// channel's definition, not an optimization target.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shape and completeness (sum K†K = I within tolerance).
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        let first = ops.first().ok_or(ChannelError::EmptyKrausSet)?;
        let dim = first.dim();
        for op in &ops {
            if op.dim() != dim {
                return Err(ChannelError::DimensionMismatch {
                    expected: dim,
                    found: op.dim(),
                });
            }
        }
        let chan = KrausChannel { ops };
        let residual = chan.completeness_residual();
        if residual > tol::COMPLETENESS {
            return Err(ChannelError::CompletenessViolation { residual });
        }
        Ok(chan)
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// Largest entry of |sum K†K - I|.
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.dim();
        let mut acc = ComplexMatrix::zeros(dim);
        for op in &self.ops {
            let kk = op
                .adjoint()
                .matmul(op)
                .expect("same-dimension product");
            acc = acc.add(&kk);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(dim))
    }

    /// Lifts a single-qubit channel to a two-qubit channel acting on one
    /// site: each K becomes K ⊗ I (site A) or I ⊗ K (site B).
    pub fn extend_to_site(&self, site: QubitSite) -> Result<KrausChannel, ChannelError> {
        if self.dim() != 2 {
            return Err(ChannelError::NotSingleQubit { found: self.dim() });
        }
        let id = ComplexMatrix::identity(2);
        let ops = self
            .ops
            .iter()
            .map(|k| match site {
                QubitSite::A => k.tensor(&id),
                QubitSite::B => id.tensor(k),
            })
            .collect();
        KrausChannel::new(ops)
    }

    /// Applies the channel: rho -> sum K rho K†. The output is revalidated
    /// as a density matrix; a failure there means the channel itself is
    /// broken.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, ChannelError> {
        if rho.dim() != self.dim() {
            return Err(ChannelError::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let mut acc = ComplexMatrix::zeros(self.dim());
        for k in &self.ops {
            let term = k
                .matmul(rho.matrix())
                .and_then(|m| m.matmul(&k.adjoint()))
                .expect("same-dimension products");
            acc = acc.add(&term);
        }
        Ok(DensityMatrix::new(acc)?)
    }
}

/// Amplitude damping with decay probability p: |1> relaxes to |0>.
/// Kraus operators are K1 = [[1, 0], [0, sqrt(1-p)]] and
/// K2 = [[0, sqrt(p)], [0, 0]].
pub fn adc(p: DampingStrength) -> KrausChannel {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let keep = Complex64::new((1.0 - p.value()).sqrt(), 0.0);
    let decay = Complex64::new(p.value().sqrt(), 0.0);
    let k1 = ComplexMatrix::new(2, vec![one, zero, zero, keep]).expect("finite entries");
    let k2 = ComplexMatrix::new(2, vec![zero, decay, zero, zero]).expect("finite entries");
    KrausChannel::new(vec![k1, k2]).expect("amplitude damping is complete by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strength(p: f64) -> DampingStrength {
        DampingStrength::new(p).unwrap()
    }

    #[test]
    fn damping_strength_rejects_out_of_range() {
        assert!(DampingStrength::new(-0.1).is_err());
        assert!(DampingStrength::new(1.1).is_err());
        assert!(DampingStrength::new(f64::NAN).is_err());
        assert!(DampingStrength::new(0.0).is_ok());
        assert!(DampingStrength::new(1.0).is_ok());
    }

    #[test]
    fn adc_operators_at_full_decay() {
        let chan = adc(strength(1.0));
        let k1 = &chan.ops()[0];
        let k2 = &chan.ops()[1];
        let want_k1 = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let want_k2 = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(k1.max_abs_diff(&want_k1), 0.0);
        assert_eq!(k2.max_abs_diff(&want_k2), 0.0);
    }

    #[test]
    fn adc_keeps_zero_damping_identity() {
        let chan = adc(strength(0.0));
        let rho = DensityMatrix::from_pure(&[
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ])
        .unwrap();
        let out = chan.apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn full_decay_maps_excited_to_ground() {
        let chan = adc(strength(1.0));
        let excited =
            DensityMatrix::new(ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, 1.0]).unwrap())
                .unwrap();
        let out = chan.apply(&excited).unwrap();
        let ground = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(out.matrix().max_abs_diff(&ground), 0.0);
    }

    #[test]
    fn completeness_holds_across_grid() {
        for i in 0..=1000 {
            let p = i as f64 / 1000.0;
            let chan = adc(strength(p));
            assert!(
                chan.completeness_residual() <= 1e-15,
                "residual too large at p = {p}"
            );
        }
    }

    #[test]
    fn new_rejects_incomplete_set() {
        let half = ComplexMatrix::from_real(2, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        match KrausChannel::new(vec![half]) {
            Err(ChannelError::CompletenessViolation { residual }) => {
                assert!((residual - 0.75).abs() < 1e-12);
            }
            other => panic!("expected completeness violation, got {other:?}"),
        }
    }

    #[test]
    fn new_rejects_empty_set() {
        assert!(matches!(
            KrausChannel::new(vec![]),
            Err(ChannelError::EmptyKrausSet)
        ));
    }

    #[test]
    fn extension_to_site_b_matches_hand_built_operators() {
        let p = 0.36;
        let chan = adc(strength(p)).extend_to_site(QubitSite::B).unwrap();
        let s = (1.0f64 - p).sqrt();
        let r = p.sqrt();
        let want0 = ComplexMatrix::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0,
                0.0, s, 0.0, 0.0,
                0.0, 0.0, 1.0, 0.0,
                0.0, 0.0, 0.0, s,
            ],
        )
        .unwrap();
        let want1 = ComplexMatrix::from_real(
            4,
            &[
                0.0, r, 0.0, 0.0,
                0.0, 0.0, 0.0, 0.0,
                0.0, 0.0, 0.0, r,
                0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert!(chan.ops()[0].max_abs_diff(&want0) < 1e-15);
        assert!(chan.ops()[1].max_abs_diff(&want1) < 1e-15);
    }

    #[test]
    fn extension_to_site_a_matches_hand_built_operators() {
        let p = 0.36;
        let chan = adc(strength(p)).extend_to_site(QubitSite::A).unwrap();
        let s = (1.0f64 - p).sqrt();
        let r = p.sqrt();
        let want0 = ComplexMatrix::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0,
                0.0, 1.0, 0.0, 0.0,
                0.0, 0.0, s, 0.0,
                0.0, 0.0, 0.0, s,
            ],
        )
        .unwrap();
        let want1 = ComplexMatrix::from_real(
            4,
            &[
                0.0, 0.0, r, 0.0,
                0.0, 0.0, 0.0, r,
                0.0, 0.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert!(chan.ops()[0].max_abs_diff(&want0) < 1e-15);
        assert!(chan.ops()[1].max_abs_diff(&want1) < 1e-15);
    }

    #[test]
    fn extension_keeps_zero_operator() {
        let chan = adc(strength(0.0)).extend_to_site(QubitSite::B).unwrap();
        assert_eq!(chan.ops().len(), 2);
        assert_eq!(chan.ops()[1].max_abs(), 0.0);
    }

    #[test]
    fn extension_rejects_two_qubit_channel() {
        let big = KrausChannel::new(vec![ComplexMatrix::identity(4)]).unwrap();
        assert!(matches!(
            big.extend_to_site(QubitSite::A),
            Err(ChannelError::NotSingleQubit { found: 4 })
        ));
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let chan = adc(strength(0.3));
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            chan.apply(&rho),
            Err(ChannelError::DimensionMismatch { expected: 2, found: 4 })
        ));
    }

    #[test]
    fn site_channels_commute_on_disjoint_qubits() {
        // Damping A then B equals damping B then A when the sites differ.
        let bell = crate::scenarios::bell(crate::scenarios::BellKind::PhiPlus);
        for i in 0..5 {
            for j in 0..5 {
                let pa = i as f64 / 4.0;
                let pb = j as f64 / 4.0;
                let on_a = adc(strength(pa)).extend_to_site(QubitSite::A).unwrap();
                let on_b = adc(strength(pb)).extend_to_site(QubitSite::B).unwrap();
                let ab = on_b.apply(&on_a.apply(&bell).unwrap()).unwrap();
                let ba = on_a.apply(&on_b.apply(&bell).unwrap()).unwrap();
                assert!(
                    ab.matrix().max_abs_diff(ba.matrix()) <= 1e-12,
                    "order mattered at pa = {pa}, pb = {pb}"
                );
            }
        }
    }
}
