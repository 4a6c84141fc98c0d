use std::f64::consts::PI;

use kraus_sphere::channels::{conjugate, pauli_x, pauli_y, pauli_z};
use kraus_sphere::{
    apply_angles, apply_channel, build_flip_channel, channel_from_angles, completeness_gram, finite_transform,
    frame_to_kraus, generator_basis, hermitian_eig, identity_frame, kraus_to_frame, matrix_exp_oracle, psd_sqrt,
    sample_bures, uhlmann_fidelity, AngleVector, ChannelKind, ComplexMatrix, DensityMatrix, KrausSet,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn angles(n: usize) -> impl Strategy<Value = AngleVector> {
    prop::collection::vec(-PI..PI, n).prop_map(|v| AngleVector::new(v).unwrap())
}

fn state(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    any::<u64>().prop_map(move |seed| sample_bures(seed, 1, dim).unwrap().remove(0))
}

fn random_channel(d: usize, m: usize) -> impl Strategy<Value = KrausSet> {
    angles((m * d) * (m * d) - 1).prop_map(move |a| channel_from_angles(d, m, &a).unwrap())
}

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |raw| {
        let a = ComplexMatrix::from_fn(dim, dim, |i, j| Complex64::new(raw[i * dim + j].0, raw[i * dim + j].1));
        (&a + &a.dagger()).scale_real(0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(a in hermitian(4)) {
        let eig = hermitian_eig(&a).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(eig.reconstruct().max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn sqrt_squares_back(rho in state(4)) {
        let s = psd_sqrt(&rho).unwrap();
        prop_assert!((&s * &s).max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn fidelity_symmetric_and_bounded(a in state(2), b in state(2), c in state(3), e in state(3)) {
        for (x, y) in [(&a, &b), (&c, &e)] {
            let f = uhlmann_fidelity(x, y).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!((f - uhlmann_fidelity(y, x).unwrap()).abs() < 1e-8);
            prop_assert!((uhlmann_fidelity(x, x).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rotation_is_one_parameter_group(idx in 0usize..15, s in -3.0..3.0f64, t in -3.0..3.0f64) {
        let basis = generator_basis(8).unwrap();
        let g = &basis.generators()[idx];
        let product = &finite_transform(g, s) * &finite_transform(g, t);
        prop_assert!(product.max_abs_diff(&finite_transform(g, s + t)) < 1e-12);
        let oracle = matrix_exp_oracle(&g.matrix(), s).unwrap();
        prop_assert!(finite_transform(g, s).max_abs_diff(&oracle) < 1e-10);
    }

    #[test]
    fn rotated_frames_stay_valid(a in angles(63)) {
        let basis = generator_basis(16).unwrap();
        let frame = apply_angles(&basis, &a, &identity_frame(2, 4).unwrap()).unwrap();
        prop_assert!(frame.invariant_deviation() < 1e-10);
    }

    #[test]
    fn frame_round_trip(set in random_channel(2, 3)) {
        let frame = kraus_to_frame(&set).unwrap();
        prop_assert_eq!(frame_to_kraus(&frame).unwrap(), set.clone());
        prop_assert!(completeness_gram(&frame).max_abs_diff(&set.completeness_sum()) < 1e-14);
    }

    #[test]
    fn scaled_operators_break_completeness(set in random_channel(2, 2), scale in 1.01..2.0f64) {
        let scaled = KrausSet::new(set.operators().iter().map(|k| k.scale_real(scale)).collect()).unwrap();
        prop_assert!(kraus_to_frame(&scaled).is_err());
        let frame = kraus_sphere::KrausFrame::from_raw(2, 2, kraus_to_frame(&set).unwrap().vectors().iter()
            .map(|v| v.iter().map(|x| x * scale).collect()).collect()).unwrap();
        prop_assert!(frame.validate(1e-6).is_err());
    }

    #[test]
    fn channels_preserve_states(set in random_channel(4, 1), rho in state(4), sigma in state(4), w in 0.0..1.0f64) {
        let out = apply_channel(&set, &rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(out.matrix().hermiticity_deviation() < 1e-12);
        // Linear on mixtures.
        let mixed = rho.mix(&sigma, w).unwrap();
        let lhs = apply_channel(&set, &mixed).unwrap();
        let rhs = out.mix(&apply_channel(&set, &sigma).unwrap(), w).unwrap();
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
    }

    #[test]
    fn flip_is_pauli_after_complement(p in 0.0..1.0f64, rho in state(2), which in 0usize..3) {
        let (kind, pauli) = [
            (ChannelKind::BitFlip, pauli_x()),
            (ChannelKind::PhaseFlip, pauli_z()),
            (ChannelKind::BitPhaseFlip, pauli_y()),
        ][which].clone();
        let direct = apply_channel(&build_flip_channel(kind, p).unwrap(), &rho).unwrap();
        let complement = apply_channel(&build_flip_channel(kind, 1.0 - p).unwrap(), &rho).unwrap();
        let composed = conjugate(&pauli, &complement).unwrap();
        prop_assert!(direct.matrix().max_abs_diff(composed.matrix()) < 1e-12);
    }
}
