//! Seeded random mixed states.
//!
//! All sampling draws from `ChaCha8Rng::seed_from_u64(seed)`, so a seed fixes
//! the output on a given platform. Complex Gaussians use independent
//! `StandardNormal` real and imaginary parts.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Uniform over the volume of the Bloch ball (single qubit only).
    BlochBallUniform,
    /// Bures measure via `(I + U) G G† (I + U)†` with Ginibre `G` and Haar `U`.
    Bures,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub n_qubits: usize,
    pub count: usize,
    pub seed: u64,
    pub measure: Measure,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.count == 0 {
            return Err(Error::Config("n_qubits and count must be positive".into()));
        }
        if self.measure == Measure::BlochBallUniform && self.n_qubits != 1 {
            return Err(Error::Config("bloch_ball_uniform sampling requires n_qubits = 1".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

pub fn sample_states(cfg: &SampleConfig) -> Result<Vec<DensityMatrix>> {
    cfg.validate()?;
    match cfg.measure {
        Measure::BlochBallUniform => Ok(sample_bloch_ball(cfg.seed, cfg.count)),
        Measure::Bures => sample_bures(cfg.seed, cfg.count, cfg.dim()),
    }
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

pub fn sample_bloch_ball(seed: u64, count: usize) -> Vec<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dir = loop {
                let v = [normal(&mut rng), normal(&mut rng), normal(&mut rng)];
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-12 {
                    break v.map(|x| x / n);
                }
            };
            let radius = rng.random::<f64>().cbrt();
            DensityMatrix::from_bloch(dir.map(|x| x * radius)).expect("|r| <= 1")
        })
        .collect()
}

fn ginibre(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| complex_normal(rng))
}

/// Haar-random unitary: QR of a Ginibre matrix with the diagonal of `R` made real-positive.
pub fn haar_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let z = ginibre(rng, dim);
    let qr = DMatrix::from_row_slice(dim, dim, z.entries()).qr();
    let (q, r) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

pub fn sample_bures(seed: u64, count: usize, dim: usize) -> Result<Vec<DensityMatrix>> {
    if dim < 2 {
        return Err(Error::Config(format!("Bures sampling needs dim >= 2, got {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = ginibre(&mut rng, dim);
            let u = haar_unitary(&mut rng, dim);
            let a = &(&ComplexMatrix::identity(dim) + &u) * &g;
            let unnormalized = (&a * &a.dagger()).hermitian_part();
            let trace = unnormalized.trace().re;
            DensityMatrix::new(unnormalized.scale_real(1.0 / trace))
        })
        .collect()
}

/// States as row-major lists of `[re, im]` pairs.
pub fn encode_states(states: &[DensityMatrix]) -> Vec<Vec<Complex64>> {
    states.iter().map(|s| s.matrix().entries().to_vec()).collect()
}

pub fn decode_states(raw: Vec<Vec<Complex64>>) -> Result<Vec<DensityMatrix>> {
    raw.into_iter().map(|e| DensityMatrix::new(ComplexMatrix::square_from_entries(e)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean(states: &[DensityMatrix]) -> ComplexMatrix {
        let d = states[0].dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for s in states {
            acc = &acc + s.matrix();
        }
        acc.scale_real(1.0 / states.len() as f64)
    }

    #[test]
    fn bloch_samples_are_states() {
        for s in sample_bloch_ball(3, 500) {
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-15);
            let eig = crate::linalg::hermitian_eig(s.matrix()).unwrap();
            assert!(eig.values[0] >= -1e-12 && eig.values[1] <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn bloch_mean_is_maximally_mixed() {
        let m = mean(&sample_bloch_ball(11, 10_000));
        assert!(m.max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 0.02);
    }

    #[test]
    fn bloch_radius_ks() {
        // Kolmogorov–Smirnov distance of |r| against F(r) = r³
        let mut radii: Vec<f64> = sample_bloch_ball(5, 10_000)
            .iter()
            .map(|s| {
                let m = s.matrix();
                let x = 2.0 * m.get(0, 1).re;
                let y = 2.0 * m.get(1, 0).im;
                let z = 2.0 * m.get(0, 0).re - 1.0;
                (x * x + y * y + z * z).sqrt()
            })
            .collect();
        radii.sort_by(f64::total_cmp);
        let n = radii.len() as f64;
        let ks = radii
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let cdf = r.powi(3);
                (cdf - i as f64 / n).abs().max((cdf - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "KS distance {ks}");
    }

    #[test]
    fn deterministic_given_seed() {
        assert_eq!(sample_bloch_ball(42, 50), sample_bloch_ball(42, 50));
        assert_ne!(sample_bloch_ball(42, 5), sample_bloch_ball(43, 5));
        assert_eq!(sample_bures(9, 20, 4).unwrap(), sample_bures(9, 20, 4).unwrap());
    }

    #[test]
    fn bures_samples_are_states() {
        for dim in [2, 4, 8] {
            assert_eq!(sample_bures(1, 50, dim).unwrap().len(), 50);
        }
        assert!(sample_bures(1, 1, 1).is_err());
    }

    #[test]
    fn bures_mean_is_maximally_mixed() {
        let m = mean(&sample_bures(17, 10_000, 2).unwrap());
        assert!(m.max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 0.02);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for dim in [2, 3, 8] {
            let u = haar_unitary(&mut rng, dim);
            assert!((&u.dagger() * &u).max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        let cfg = SampleConfig { n_qubits: 2, count: 10, seed: 0, measure: Measure::BlochBallUniform };
        assert!(sample_states(&cfg).is_err());
        let cfg = SampleConfig { measure: Measure::Bures, ..cfg };
        assert_eq!(sample_states(&cfg).unwrap()[0].dim(), 4);
    }

    #[test]
    fn json_layout_round_trip() {
        let states = sample_bures(2, 3, 4).unwrap();
        let text = serde_json::to_string(&encode_states(&states)).unwrap();
        let back = decode_states(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, states);
    }
}
