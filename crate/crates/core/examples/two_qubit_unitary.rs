//! Two-qubit bit flip on Bures-random states, recovered with a single
//! unitary Kraus operator (15 angles).

use kraus_sphere::{build_tensor_channel, learn_quasi_inverse, sample_bures, ChannelKind, OptimizerConfig};

fn main() -> kraus_sphere::Result<()> {
    let channel = build_tensor_channel(ChannelKind::BitFlip, 0.8, 2)?;
    println!("{} Kraus operators on d = {}", channel.count(), channel.dim());
    let states = sample_bures(5, 100, 4)?;

    let cfg = OptimizerConfig { m: Some(1), ..OptimizerConfig::default() };
    let result = learn_quasi_inverse(&channel, &states, &cfg)?;
    println!(
        "average fidelity {:.4} -> {:.4} in {} iterations",
        result.fidelity_before,
        result.fidelity_after,
        result.iterations_used()
    );
    println!("learned unitary:\n{:?}", result.channel.operators()[0]);
    Ok(())
}
