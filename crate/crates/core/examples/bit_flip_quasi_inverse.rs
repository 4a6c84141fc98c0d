//! Learn a quasi-inverse of the single-qubit bit flip at p = 0.8 and inspect it.
//!
//! Run with `cargo run --release --example bit_flip_quasi_inverse`.

use kraus_sphere::channels::{conjugate, pauli_x};
use kraus_sphere::{
    apply_channel, build_flip_channel, dominant_kraus_report, learn_quasi_inverse, sample_bloch_ball, uhlmann_fidelity,
    ChannelKind, OptimizerConfig,
};

fn main() -> kraus_sphere::Result<()> {
    let channel = build_flip_channel(ChannelKind::BitFlip, 0.8)?;
    let states = sample_bloch_ball(7, 1000);

    let cfg = OptimizerConfig::default();
    let start = std::time::Instant::now();
    let result = learn_quasi_inverse(&channel, &states, &cfg)?;
    println!(
        "average fidelity {:.4} -> {:.4} after {} iterations ({:.1}s)",
        result.fidelity_before,
        result.fidelity_after,
        result.iterations_used(),
        start.elapsed().as_secs_f64()
    );

    let report = dominant_kraus_report(&result.channel);
    println!("kraus weights: {:.4?}", report.weights);
    println!("effectively unitary: {}", report.is_effectively_unitary);

    // The recovery should behave like X on fresh states.
    let mut worst = 1.0f64;
    for rho in sample_bloch_ball(1234, 200) {
        let recovered = apply_channel(&result.channel, &rho)?;
        let flipped = conjugate(&pauli_x(), &rho)?;
        worst = worst.min(uhlmann_fidelity(&flipped, &recovered)?);
    }
    println!("worst held-out fidelity against XρX: {worst:.5}");
    Ok(())
}
