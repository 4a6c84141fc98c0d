//! General two-qubit ansatz (m = 16, 4095 angles). Slow; run with
//! `cargo test --release --test slow -- --ignored --nocapture`.

use kraus_sphere::{build_tensor_channel, learn_quasi_inverse, sample_bures, ChannelKind, OptimizerConfig};

#[test]
#[ignore = "several hours on one core"]
fn two_qubit_general_ansatz() {
    let states = sample_bures(1, 100, 4).unwrap();
    let cfg = OptimizerConfig { m: Some(16), ..OptimizerConfig::default() };
    let mut failures = Vec::new();
    for (kind, want) in [(ChannelKind::BitFlip, 0.6884), (ChannelKind::PhaseFlip, 0.6738), (ChannelKind::BitPhaseFlip, 0.6637)] {
        let channel = build_tensor_channel(kind, 0.8, 2).unwrap();
        let result = learn_quasi_inverse(&channel, &states, &cfg).unwrap();
        println!("{kind:?}: before {:.4} after {:.4}", result.fidelity_before, result.fidelity_after);
        if (result.fidelity_before - want).abs() > 0.06 || result.fidelity_after < 0.90 {
            failures.push(kind);
        }
    }
    assert!(failures.is_empty(), "outside thresholds: {failures:?}");
}
