//! Pauli noise channels and channel application.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{KrausSet, COMPLETENESS_TOL, FRAME_LOOSE_TOL};
use crate::linalg::{ComplexMatrix, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
    Depolarizing,
    Custom,
}

impl ChannelKind {
    pub fn is_flip(self) -> bool {
        matches!(self, Self::BitFlip | Self::PhaseFlip | Self::BitPhaseFlip)
    }

    /// The Pauli applied with probability `p` by a flip channel.
    pub fn flip_pauli(self) -> Option<ComplexMatrix> {
        match self {
            Self::BitFlip => Some(pauli_x()),
            Self::PhaseFlip => Some(pauli_z()),
            Self::BitPhaseFlip => Some(pauli_y()),
            _ => None,
        }
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (-1.0, 0.0)]])
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(())
}

/// `{√(1-p) I, √p P}` with `P = X, Z, Y` for bit, phase and bit-phase flips.
pub fn build_flip_channel(kind: ChannelKind, p: f64) -> Result<KrausSet> {
    check_probability(p)?;
    let pauli = kind.flip_pauli().ok_or_else(|| Error::InvalidChannel(format!("{kind:?} is not a flip channel")))?;
    KrausSet::new(vec![ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()), pauli.scale_real(p.sqrt())])
}

/// `{√(1-p) I, √(p/3) X, √(p/3) Y, √(p/3) Z}`.
pub fn build_depolarizing(p: f64) -> Result<KrausSet> {
    check_probability(p)?;
    let w = (p / 3.0).sqrt();
    KrausSet::new(vec![
        ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
        pauli_x().scale_real(w),
        pauli_y().scale_real(w),
        pauli_z().scale_real(w),
    ])
}

/// Independent flip noise on each of `n_qubits` qubits: all `2^n` tensor
/// products of the single-qubit Kraus operators, first qubit most significant.
pub fn build_tensor_channel(kind: ChannelKind, p: f64, n_qubits: usize) -> Result<KrausSet> {
    if n_qubits == 0 {
        return Err(Error::InvalidChannel("n_qubits must be at least 1".into()));
    }
    let single = build_flip_channel(kind, p)?;
    let mut ops = vec![ComplexMatrix::identity(1)];
    for _ in 0..n_qubits {
        ops = ops.iter().flat_map(|a| single.operators().iter().map(move |b| a.kron(b))).collect();
    }
    KrausSet::new(ops)
}

/// `Σ K ρ K†` on raw matrices, Hermitian-symmetrized.
pub(crate) fn kraus_sum(set: &KrausSet, rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for k in set.operators() {
        out = &out + &(&(k * rho) * &k.dagger());
    }
    out.hermitian_part()
}

pub fn apply_channel(set: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if set.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: rho.dim() });
    }
    set.check_complete(FRAME_LOOSE_TOL)?;
    DensityMatrix::new(kraus_sum(set, rho.matrix()))
}

/// Noise channel description as it appears in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    #[serde(default)]
    pub p: f64,
    #[serde(default = "one")]
    pub n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_kraus: Option<KrausSet>,
}

fn one() -> usize {
    1
}

impl ChannelSpec {
    pub fn flip(kind: ChannelKind, p: f64, n_qubits: usize) -> Self {
        Self { kind, p, n_qubits, custom_kraus: None }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.n_qubits == 0 {
            return Err(Error::Config("n_qubits must be at least 1".into()));
        }
        match (self.kind, &self.custom_kraus) {
            (ChannelKind::Custom, None) => Err(Error::Config("custom channel requires custom_kraus".into())),
            (ChannelKind::Custom, Some(k)) => {
                if k.dim() != 1 << self.n_qubits {
                    return Err(Error::Config(format!(
                        "custom_kraus has dimension {} but n_qubits = {}",
                        k.dim(),
                        self.n_qubits
                    )));
                }
                k.check_complete(COMPLETENESS_TOL)
            }
            (_, Some(_)) => Err(Error::Config("custom_kraus is only allowed for kind = custom".into())),
            (ChannelKind::Depolarizing, None) if self.n_qubits != 1 => {
                Err(Error::Config("depolarizing noise is single-qubit only".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn build(&self) -> Result<KrausSet> {
        self.validate()?;
        match self.kind {
            ChannelKind::Custom => Ok(self.custom_kraus.clone().expect("validated")),
            ChannelKind::Depolarizing => build_depolarizing(self.p),
            kind => build_tensor_channel(kind, self.p, self.n_qubits),
        }
    }
}

/// Applies `U ρ U†`.
pub fn conjugate(u: &ComplexMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new((&(u * rho.matrix()) * &u.dagger()).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        DensityMatrix::pure(&[c(s, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn bit_flip_operators() {
        let k = build_flip_channel(ChannelKind::BitFlip, 0.8).unwrap();
        assert_eq!(k.count(), 2);
        assert!(k.operators()[0].max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.2f64.sqrt())) < 1e-16);
        assert!(k.operators()[1].max_abs_diff(&pauli_x().scale_real(0.8f64.sqrt())) < 1e-16);
        assert!(k.completeness_deviation() < 1e-15);
    }

    #[test]
    fn zero_noise_is_identity() {
        for kind in [ChannelKind::BitFlip, ChannelKind::PhaseFlip, ChannelKind::BitPhaseFlip] {
            let k = build_flip_channel(kind, 0.0).unwrap();
            assert_eq!(k.operators()[0], ComplexMatrix::identity(2));
            assert_eq!(k.operators()[1].norm(), 0.0);
        }
        let rho = DensityMatrix::from_bloch([0.2, 0.3, -0.4]).unwrap();
        let out = apply_channel(&build_depolarizing(0.0).unwrap(), &rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn half_phase_flip_dephases_plus() {
        let k = build_flip_channel(ChannelKind::PhaseFlip, 0.5).unwrap();
        assert!((k.operators()[0].get(0, 0).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((k.operators()[1].get(0, 0).re - 0.5f64.sqrt()).abs() < 1e-15);
        let out = apply_channel(&k, &plus_state()).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn phase_flip_scales_coherences() {
        for p in [0.1, 0.3, 0.9] {
            let out = apply_channel(&build_flip_channel(ChannelKind::PhaseFlip, p).unwrap(), &plus_state()).unwrap();
            assert!((out.matrix().get(0, 1).re - 0.5 * (1.0 - 2.0 * p)).abs() < 1e-15);
            assert!((out.matrix().get(0, 0).re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn bit_flip_on_zero() {
        let out = apply_channel(
            &build_flip_channel(ChannelKind::BitFlip, 0.8).unwrap(),
            &DensityMatrix::basis_state(2, 0),
        )
        .unwrap();
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.2, 0.8])) < 1e-15);
    }

    #[test]
    fn depolarizing_examples() {
        let rho = DensityMatrix::basis_state(2, 0);
        let out = apply_channel(&build_depolarizing(0.75).unwrap(), &rho).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
        let out = apply_channel(&build_depolarizing(0.8).unwrap(), &rho).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[1.0 - 1.6 / 3.0, 1.6 / 3.0]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn probability_range() {
        assert!(matches!(build_flip_channel(ChannelKind::BitFlip, 1.2), Err(Error::ProbabilityOutOfRange(_))));
        assert!(matches!(build_depolarizing(-0.1), Err(Error::ProbabilityOutOfRange(_))));
        assert!(build_flip_channel(ChannelKind::Depolarizing, 0.1).is_err());
    }

    #[test]
    fn two_qubit_bit_flip() {
        let k = build_tensor_channel(ChannelKind::BitFlip, 0.8, 2).unwrap();
        let (i, x) = (ComplexMatrix::identity(2), pauli_x());
        let expected = [
            i.kron(&i).scale_real(0.04f64.sqrt()),
            i.kron(&x).scale_real(0.16f64.sqrt()),
            x.kron(&i).scale_real(0.16f64.sqrt()),
            x.kron(&x).scale_real(0.64f64.sqrt()),
        ];
        assert_eq!(k.count(), 4);
        assert_eq!(k.dim(), 4);
        for (a, b) in k.operators().iter().zip(&expected) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
        for kind in [ChannelKind::BitFlip, ChannelKind::PhaseFlip, ChannelKind::BitPhaseFlip] {
            for p in [0.0, 0.3, 0.8, 1.0] {
                assert!(build_tensor_channel(kind, p, 2).unwrap().completeness_deviation() < 1e-15);
            }
        }
    }

    #[test]
    fn single_qubit_tensor_reduces() {
        for kind in [ChannelKind::BitFlip, ChannelKind::PhaseFlip, ChannelKind::BitPhaseFlip] {
            assert_eq!(build_tensor_channel(kind, 0.3, 1).unwrap(), build_flip_channel(kind, 0.3).unwrap());
        }
    }

    #[test]
    fn dimension_mismatch() {
        let k = build_tensor_channel(ChannelKind::BitFlip, 0.3, 2).unwrap();
        assert!(matches!(
            apply_channel(&k, &DensityMatrix::maximally_mixed(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(ChannelSpec::flip(ChannelKind::BitFlip, 0.8, 2).build().is_ok());
        assert!(ChannelSpec::flip(ChannelKind::Custom, 0.0, 1).validate().is_err());
        assert!(ChannelSpec::flip(ChannelKind::Depolarizing, 0.5, 2).validate().is_err());
        let custom = ChannelSpec {
            kind: ChannelKind::Custom,
            p: 0.0,
            n_qubits: 1,
            custom_kraus: Some(build_depolarizing(0.2).unwrap()),
        };
        assert_eq!(custom.build().unwrap(), build_depolarizing(0.2).unwrap());
        let json = r#"{"kind":"bit_flip","p":0.8,"n_qubits":1,"typo":1}"#;
        assert!(serde_json::from_str::<ChannelSpec>(json).is_err());
    }
}
