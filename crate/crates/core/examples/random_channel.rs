//! Every angle vector names a valid channel.

use kraus_sphere::{apply_channel, channel_from_angles, sample_bloch_ball, AngleVector, ChannelAnsatz};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> kraus_sphere::Result<()> {
    let (d, m) = (2, 4);
    let ansatz = ChannelAnsatz::new(d, m)?;
    println!("d = {d}, m = {m}: {} angles", ansatz.angle_count());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let angles: Vec<f64> = (0..ansatz.angle_count()).map(|_| rng.random_range(-3.0..3.0)).collect();
    let angles = AngleVector::new(angles)?;
    let channel = channel_from_angles(d, m, &angles)?;
    println!("completeness deviation {:.2e}", channel.completeness_deviation());
    for (i, k) in channel.operators().iter().enumerate() {
        println!("K{} =\n{:?}", i + 1, k);
    }

    let rho = &sample_bloch_ball(0, 1)[0];
    let out = apply_channel(&channel, rho)?;
    println!("ρ  =\n{rho:?}\nE(ρ) =\n{out:?}");
    println!("trace of E(ρ): {:.12}", out.matrix().trace().re);
    Ok(())
}
