//! Recovered fidelity against noise strength for the bit flip.
//!
//! Prints the curve as CSV. Uses a smaller ensemble than the acceptance
//! runs so it finishes quickly.

use kraus_sphere::experiment::{CurveRow, CURVE_HEADER};
use kraus_sphere::{build_flip_channel, learn_quasi_inverse, sample_bloch_ball, ChannelKind, OptimizerConfig};

fn main() -> kraus_sphere::Result<()> {
    let cfg = OptimizerConfig::default();
    println!("{CURVE_HEADER}");
    for (i, p) in [0.1, 0.3, 0.5, 0.7, 0.9].into_iter().enumerate() {
        let start = std::time::Instant::now();
        let channel = build_flip_channel(ChannelKind::BitFlip, p)?;
        let states = sample_bloch_ball(100 + i as u64, 300);
        let result = learn_quasi_inverse(&channel, &states, &cfg)?;
        let row = CurveRow {
            p,
            fidelity_before: result.fidelity_before,
            fidelity_after: result.fidelity_after,
            iterations_used: result.iterations_used(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
        };
        println!("{}", row.to_csv_line());
    }
    Ok(())
}
