//! Quasi-inverse learning by gradient descent on the channel angles.
//!
//! The loss is `1 - F̄` where `F̄` is the mean Uhlmann fidelity between the
//! recovered states `E_θ(ρ'_i)` and the originals `ρ_i`. Gradients are central
//! differences, one loss pair per angle, evaluated in parallel on a rayon pool
//! capped by `KRAUS_SPHERE_THREADS`. Each component is computed independently
//! and gathered in index order, so the gradient does not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::apply_channel;
use crate::error::{Error, Result};
use crate::geometry::{KrausSet, FRAME_LOOSE_TOL};
use crate::lie::{AngleVector, ChannelAnsatz};
use crate::linalg::{clamp_fidelity, fidelity_with_sqrt, psd_sqrt, ComplexMatrix, DensityMatrix};
use num_complex::Complex64;

/// Environment variable capping the number of gradient worker threads.
pub const THREADS_ENV: &str = "KRAUS_SPHERE_THREADS";
/// Dominant Kraus weight at or above which a channel counts as unitary.
pub const UNITARY_WEIGHT: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Init {
    Zeros,
    SmallRandom { scale: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default = "defaults::eta0")]
    pub eta0: f64,
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
    #[serde(default = "defaults::max_iters")]
    pub max_iters: usize,
    /// Convergence requires `|ΔL| < loss_tol` ...
    #[serde(default = "defaults::loss_tol")]
    pub loss_tol: f64,
    /// ... together with `‖∇L‖ < grad_tol`.
    #[serde(default = "defaults::grad_tol")]
    pub grad_tol: f64,
    /// Iterations without a new best loss before stopping.
    #[serde(default = "defaults::patience")]
    pub patience: usize,
    #[serde(default = "defaults::init")]
    pub init: Init,
    /// Kraus operators in the ansatz. Defaults to `d²` for one qubit and `1` otherwise.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

mod defaults {
    use super::Init;

    pub fn eta0() -> f64 {
        0.1
    }
    pub fn epsilon() -> f64 {
        1e-6
    }
    pub fn max_iters() -> usize {
        500
    }
    pub fn loss_tol() -> f64 {
        1e-7
    }
    pub fn grad_tol() -> f64 {
        1e-5
    }
    pub fn patience() -> usize {
        25
    }
    pub fn init() -> Init {
        Init::Zeros
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            eta0: defaults::eta0(),
            epsilon: defaults::epsilon(),
            max_iters: defaults::max_iters(),
            loss_tol: defaults::loss_tol(),
            grad_tol: defaults::grad_tol(),
            patience: defaults::patience(),
            init: defaults::init(),
            m: None,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.eta0) || !positive(self.epsilon) {
            return Err(Error::Config("eta0 and epsilon must be positive".into()));
        }
        if self.max_iters == 0 || self.patience == 0 {
            return Err(Error::Config("max_iters and patience must be positive".into()));
        }
        if let Init::SmallRandom { scale } = self.init {
            if !scale.is_finite() || scale < 0.0 {
                return Err(Error::Config("small_random scale must be finite and non-negative".into()));
            }
        }
        Ok(())
    }

    /// Ansatz size for a `d`-dimensional system.
    pub fn kraus_count(&self, d: usize) -> usize {
        self.m.unwrap_or(if d == 2 { d * d } else { 1 })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub iteration: usize,
    pub loss: f64,
    pub avg_fidelity: f64,
    pub grad_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiInverseResult {
    pub channel: KrausSet,
    pub angles: AngleVector,
    pub history: Vec<TrainingRecord>,
    pub fidelity_before: f64,
    pub fidelity_after: f64,
}

impl QuasiInverseResult {
    pub fn iterations_used(&self) -> usize {
        self.history.len()
    }
}

/// Mean Uhlmann fidelity over `(recovered, original)` pairs.
pub fn average_fidelity(pairs: &[(DensityMatrix, DensityMatrix)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let mut total = 0.0;
    for (recovered, original) in pairs {
        total += crate::linalg::uhlmann_fidelity(recovered, original)?;
    }
    Ok(total / pairs.len() as f64)
}

/// An original state with its square root cached, ready for repeated fidelity evaluations.
#[derive(Clone, Debug)]
struct FidelityTarget {
    rho: ComplexMatrix,
    sqrt_rho: ComplexMatrix,
    det: f64,
}

impl FidelityTarget {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let m = rho.matrix();
        let det = if m.rows() == 2 { hermitian_det2(m.entries()) } else { 0.0 };
        Ok(Self { rho: m.clone(), sqrt_rho: psd_sqrt(rho)?, det })
    }

    /// `F(σ, ρ)`; for qubits uses `Tr(ρσ) + 2√(det ρ det σ)`.
    fn fidelity(&self, sigma: &[Complex64]) -> Result<f64> {
        if self.rho.rows() == 2 {
            let r = self.rho.entries();
            let overlap = (r[0] * sigma[0] + r[1] * sigma[2] + r[2] * sigma[1] + r[3] * sigma[3]).re;
            let cross = (self.det * hermitian_det2(sigma)).max(0.0);
            return clamp_fidelity(overlap + 2.0 * cross.sqrt());
        }
        let sigma = ComplexMatrix::new(self.rho.rows(), self.rho.rows(), sigma.to_vec())?;
        fidelity_with_sqrt(&self.sqrt_rho, &sigma)
    }
}

fn hermitian_det2(m: &[Complex64]) -> f64 {
    m[0].re * m[3].re - m[1].norm_sqr()
}

/// `out = Σ K ρ K†` on flat row-major buffers.
fn kraus_sum_into(ops: &[ComplexMatrix], rho: &[Complex64], tmp: &mut [Complex64], out: &mut [Complex64]) {
    let d = (rho.len() as f64).sqrt() as usize;
    out.fill(Complex64::new(0.0, 0.0));
    for op in ops {
        let k = op.entries();
        if k.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            continue;
        }
        for r in 0..d {
            for c in 0..d {
                tmp[r * d + c] = (0..d).map(|a| k[r * d + a] * rho[a * d + c]).sum();
            }
        }
        for r in 0..d {
            for c in 0..d {
                out[r * d + c] += (0..d).map(|b| tmp[r * d + b] * k[c * d + b].conj()).sum::<Complex64>();
            }
        }
    }
}

/// Fixed corrupted/original ensembles and an ansatz; evaluates the recovery loss.
#[derive(Clone, Debug)]
pub struct RecoveryProblem {
    ansatz: ChannelAnsatz,
    corrupted: Vec<Vec<Complex64>>,
    targets: Vec<FidelityTarget>,
}

impl RecoveryProblem {
    pub fn new(corrupted: &[DensityMatrix], originals: &[DensityMatrix], m: usize) -> Result<Self> {
        if corrupted.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        if corrupted.len() != originals.len() {
            return Err(Error::DimensionMismatch { expected: originals.len(), found: corrupted.len() });
        }
        let d = originals[0].dim();
        if let Some(s) = corrupted.iter().chain(originals).find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
        Ok(Self {
            ansatz: ChannelAnsatz::new(d, m)?,
            corrupted: corrupted.iter().map(|s| s.matrix().entries().to_vec()).collect(),
            targets: originals.iter().map(FidelityTarget::new).collect::<Result<_>>()?,
        })
    }

    pub fn ansatz(&self) -> &ChannelAnsatz {
        &self.ansatz
    }

    pub fn angle_count(&self) -> usize {
        self.ansatz.angle_count()
    }

    fn check_len(&self, angles: &AngleVector) -> Result<()> {
        if angles.len() != self.angle_count() {
            return Err(Error::AngleCount { expected: self.angle_count(), found: angles.len() });
        }
        Ok(())
    }

    pub fn loss(&self, angles: &AngleVector) -> Result<f64> {
        self.check_len(angles)?;
        self.loss_at(angles.as_slice())
    }

    fn loss_at(&self, angles: &[f64]) -> Result<f64> {
        let set = self.ansatz.channel_unchecked(angles);
        let d = self.ansatz.dim();
        let mut tmp = vec![Complex64::new(0.0, 0.0); d * d];
        let mut sigma = tmp.clone();
        let mut total = 0.0;
        for (rho, target) in self.corrupted.iter().zip(&self.targets) {
            kraus_sum_into(set.operators(), rho, &mut tmp, &mut sigma);
            total += target.fidelity(&sigma)?;
        }
        Ok(1.0 - total / self.targets.len() as f64)
    }

    pub fn gradient(&self, angles: &AngleVector, epsilon: f64) -> Result<Vec<f64>> {
        self.check_len(angles)?;
        central_difference(|x| self.loss_at(x), angles.as_slice(), epsilon)
    }
}

/// `L(θ) = 1 - (1/N) Σ F(E_θ(ρ'_i), ρ_i)` for a `d`-dimensional ansatz with `m` Kraus operators.
pub fn loss(
    angles: &AngleVector,
    corrupted: &[DensityMatrix],
    originals: &[DensityMatrix],
    d: usize,
    m: usize,
) -> Result<f64> {
    if let Some(s) = originals.first().filter(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
    }
    RecoveryProblem::new(corrupted, originals, m)?.loss(angles)
}

/// Central-difference gradient `[f(x + εe_i) - f(x - εe_i)] / 2ε`, components in parallel.
pub fn central_difference<E, F>(f: F, x: &[f64], epsilon: f64) -> std::result::Result<Vec<f64>, E>
where
    E: Send,
    F: Fn(&[f64]) -> std::result::Result<f64, E> + Sync,
{
    (0..x.len())
        .into_par_iter()
        .map(|i| {
            let mut probe = x.to_vec();
            probe[i] = x[i] + epsilon;
            let plus = f(&probe)?;
            probe[i] = x[i] - epsilon;
            let minus = f(&probe)?;
            Ok((plus - minus) / (2.0 * epsilon))
        })
        .collect()
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))
}

fn initial_angles(cfg: &OptimizerConfig, n: usize) -> AngleVector {
    match cfg.init {
        Init::Zeros => AngleVector::zeros(n),
        Init::SmallRandom { scale } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let angles = (0..n).map(|_| scale * rng.random_range(-1.0..=1.0)).collect();
            AngleVector::new(angles).expect("finite")
        }
    }
}

/// Learns a CPTP quasi-inverse of `channel` from `states`.
///
/// The states are corrupted once, then fixed-step descent runs from the
/// configured initial angles until `max_iters`, convergence (small loss change
/// and small gradient) or `patience` iterations without a new best loss. The
/// best angles seen are returned.
pub fn learn_quasi_inverse(
    channel: &KrausSet,
    states: &[DensityMatrix],
    cfg: &OptimizerConfig,
) -> Result<QuasiInverseResult> {
    cfg.validate()?;
    channel.check_complete(FRAME_LOOSE_TOL)?;
    if states.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let corrupted = states.iter().map(|s| apply_channel(channel, s)).collect::<Result<Vec<_>>>()?;
    let problem = RecoveryProblem::new(&corrupted, states, cfg.kraus_count(channel.dim()))?;
    let n = problem.angle_count();

    let pool = thread_pool()?;
    pool.install(|| {
        let fidelity_before = 1.0 - problem.loss(&AngleVector::zeros(n))?;
        let mut angles = initial_angles(cfg, n);
        let mut best = (f64::INFINITY, angles.clone());
        let mut history = Vec::new();
        let mut since_best = 0;
        let mut previous: Option<f64> = None;

        for iteration in 0..cfg.max_iters {
            let non_finite = |e: Error| match e {
                Error::FidelityOutOfRange(x) if !x.is_finite() => Error::NonFiniteLoss { iteration },
                e => e,
            };
            let loss = problem.loss(&angles).map_err(non_finite)?;
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { iteration });
            }
            let grad = problem.gradient(&angles, cfg.epsilon).map_err(non_finite)?;
            if grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::NonFiniteLoss { iteration });
            }
            let grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            history.push(TrainingRecord { iteration, loss, avg_fidelity: 1.0 - loss, grad_norm });

            if loss < best.0 {
                best = (loss, angles.clone());
                since_best = 0;
            } else {
                since_best += 1;
            }
            let converged = previous.is_some_and(|p| (p - loss).abs() < cfg.loss_tol) && grad_norm < cfg.grad_tol;
            if converged || since_best >= cfg.patience {
                break;
            }
            previous = Some(loss);
            for (a, g) in angles.as_mut_slice().iter_mut().zip(&grad) {
                *a -= cfg.eta0 * g;
            }
        }

        let (best_loss, best_angles) = best;
        let channel = problem.ansatz().channel(&best_angles)?;
        Ok(QuasiInverseResult {
            channel,
            angles: best_angles,
            history,
            fidelity_before,
            fidelity_after: 1.0 - best_loss,
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausReport {
    /// `Tr[(K^α)† K^α] / d` per operator.
    pub weights: Vec<f64>,
    pub is_effectively_unitary: bool,
}

pub fn dominant_kraus_report(set: &KrausSet) -> KrausReport {
    let d = set.dim() as f64;
    let weights: Vec<f64> = set.operators().iter().map(|k| k.norm().powi(2) / d).collect();
    let is_effectively_unitary = weights.iter().copied().fold(0.0, f64::max) >= UNITARY_WEIGHT;
    KrausReport { weights, is_effectively_unitary }
}
