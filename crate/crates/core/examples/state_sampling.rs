//! Seeded ensembles: uniform Bloch ball and Bures.

use kraus_sphere::{sample_states, DensityMatrix, Measure, SampleConfig};

fn purity(rho: &DensityMatrix) -> f64 {
    (rho.matrix() * rho.matrix()).trace().re
}

fn main() -> kraus_sphere::Result<()> {
    for (n_qubits, measure) in [(1, Measure::BlochBallUniform), (1, Measure::Bures), (2, Measure::Bures)] {
        let cfg = SampleConfig { n_qubits, count: 5000, seed: 1, measure };
        let states = sample_states(&cfg)?;
        let mean_purity = states.iter().map(purity).sum::<f64>() / states.len() as f64;
        println!("{n_qubits} qubit(s), {measure:?}: mean purity {mean_purity:.4}");
    }

    let a = sample_states(&SampleConfig { n_qubits: 1, count: 3, seed: 9, measure: Measure::Bures })?;
    let b = sample_states(&SampleConfig { n_qubits: 1, count: 3, seed: 9, measure: Measure::Bures })?;
    println!("same seed, same states: {}", a == b);
    println!("{:?}", a[0]);
    Ok(())
}
