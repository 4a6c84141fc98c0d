//! Experiment orchestration: config files, single learning runs, noise-strength
//! sweeps written as CSV, and channel-file validation.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::geometry::{KrausSet, FRAME_LOOSE_TOL};
use crate::linalg::DensityMatrix;
use crate::optimizer::{dominant_kraus_report, learn_quasi_inverse, OptimizerConfig, QuasiInverseResult};
use crate::sampling::{decode_states, encode_states, sample_states, SampleConfig};

pub const FORMAT_VERSION: u32 = 1;
pub const CURVE_HEADER: &str = "p,fidelity_before,fidelity_after,iterations_used,wall_time_seconds";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format_version: u32,
    pub channel: ChannelSpec,
    pub sample: SampleConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub p_grid: Vec<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

impl ExperimentConfig {
    pub fn new(channel: ChannelSpec, sample: SampleConfig, optimizer: OptimizerConfig) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            channel,
            sample,
            optimizer,
            p_grid: Vec::new(),
            output_dir: default_output_dir(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        self.channel.validate()?;
        self.sample.validate()?;
        self.optimizer.validate()?;
        if self.channel.n_qubits != self.sample.n_qubits {
            return Err(Error::Config(format!(
                "channel acts on {} qubits but states have {}",
                self.channel.n_qubits, self.sample.n_qubits
            )));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Config(format!("p_grid value {p} is outside [0, 1]")));
        }
        Ok(())
    }
}

/// Echo of everything needed to reproduce a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub mode: String,
    pub crate_version: String,
    pub rng: String,
    pub seed: u64,
    pub config: ExperimentConfig,
}

impl RunManifest {
    fn new(mode: &str, config: &ExperimentConfig) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            mode: mode.to_string(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            rng: "ChaCha8Rng::seed_from_u64".to_string(),
            seed: config.sample.seed,
            config: config.clone(),
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path.display().to_string(), e))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn write_states(path: &Path, states: &[DensityMatrix]) -> Result<()> {
    write_json(path, &encode_states(states))
}

pub fn read_states(path: &Path) -> Result<Vec<DensityMatrix>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw = serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
    decode_states(raw)
}

pub fn write_channel(path: &Path, set: &KrausSet) -> Result<()> {
    write_json(path, set)
}

/// Samples, corrupts and learns once; writes `result.json`, `states.json` and `manifest.json`.
pub fn run_single(config: &ExperimentConfig) -> Result<QuasiInverseResult> {
    config.validate()?;
    let dir = &config.output_dir;
    prepare_dir(dir)?;
    let channel = config.channel.build()?;
    let states = sample_states(&config.sample)?;
    let result = learn_quasi_inverse(&channel, &states, &config.optimizer)?;
    write_states(&dir.join("states.json"), &states)?;
    write_json(&dir.join("result.json"), &result)?;
    write_json(&dir.join("manifest.json"), &RunManifest::new("learn", config))?;
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct CurveRow {
    pub p: f64,
    pub fidelity_before: f64,
    pub fidelity_after: f64,
    pub iterations_used: usize,
    pub wall_time_seconds: f64,
}

impl CurveRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            format_sig6(self.p),
            format_sig6(self.fidelity_before),
            format_sig6(self.fidelity_after),
            self.iterations_used,
            format_sig6(self.wall_time_seconds)
        )
    }
}

/// One learning run per `p` in the grid; point `i` samples with seed `seed + i`.
/// Writes `curve.csv` and `manifest.json`.
pub fn run_curve(config: &ExperimentConfig) -> Result<Vec<CurveRow>> {
    config.validate()?;
    if config.p_grid.is_empty() {
        return Err(Error::Config("curve mode needs a non-empty p_grid".into()));
    }
    let dir = &config.output_dir;
    prepare_dir(dir)?;
    let mut rows = Vec::with_capacity(config.p_grid.len());
    for (index, &p) in config.p_grid.iter().enumerate() {
        let start = Instant::now();
        let channel = ChannelSpec { p, ..config.channel.clone() }.build()?;
        let sample = SampleConfig { seed: config.sample.seed.wrapping_add(index as u64), ..config.sample.clone() };
        let states = sample_states(&sample)?;
        let result = learn_quasi_inverse(&channel, &states, &config.optimizer)?;
        rows.push(CurveRow {
            p,
            fidelity_before: result.fidelity_before,
            fidelity_after: result.fidelity_after,
            iterations_used: result.iterations_used(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
        });
    }
    write_curve_csv(&dir.join("curve.csv"), &rows)?;
    write_json(&dir.join("manifest.json"), &RunManifest::new("curve", config))?;
    Ok(rows)
}

pub fn write_curve_csv(path: &Path, rows: &[CurveRow]) -> Result<()> {
    let csv_err = |e: csv::Error| Error::Config(format!("{}: {e}", path.display()));
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    writer.write_record(CURVE_HEADER.split(',')).map_err(csv_err)?;
    for row in rows {
        writer.write_record(row.to_csv_line().split(',')).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub fn read_curve_csv(path: &Path) -> Result<Vec<CurveRow>> {
    let csv_err = |e: csv::Error| Error::Config(format!("{}: {e}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    if reader.headers().map_err(csv_err)?.iter().collect::<Vec<_>>().join(",") != CURVE_HEADER {
        return Err(Error::Config(format!("{}: missing curve header", path.display())));
    }
    reader.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// Formats with six significant digits, `%g` style.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..6).contains(&exp) {
        trim(format!("{:.*}", (5 - exp).max(0) as usize, x))
    } else {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub d: usize,
    pub m: usize,
    pub completeness_deviation: f64,
    pub weights: Vec<f64>,
    pub is_effectively_unitary: bool,
}

impl ValidationReport {
    pub fn is_complete(&self) -> bool {
        self.completeness_deviation <= FRAME_LOOSE_TOL
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d = {}, m = {}", self.d, self.m)?;
        writeln!(f, "completeness deviation: {:e}", self.completeness_deviation)?;
        let weights: Vec<String> = self.weights.iter().map(|w| format!("{w:.6}")).collect();
        writeln!(f, "kraus weights: [{}]", weights.join(", "))?;
        writeln!(f, "effectively unitary: {}", self.is_effectively_unitary)?;
        write!(f, "complete: {}", self.is_complete())
    }
}

pub fn validate_channel_file(path: &Path) -> Result<ValidationReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let set: KrausSet = serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
    let report = dominant_kraus_report(&set);
    Ok(ValidationReport {
        d: set.dim(),
        m: set.count(),
        completeness_deviation: set.completeness_deviation(),
        weights: report.weights,
        is_effectively_unitary: report.is_effectively_unitary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(0.96712345678), "0.967123");
        assert_eq!(format_sig6(123.456789), "123.457");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(1.5e-7), "1.5e-7");
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
        assert_eq!(format_sig6(1234567.0), "1.23457e6");
    }

    #[test]
    fn config_rejects_unknown_and_inconsistent() {
        let ok = r#"{
            "format_version": 1,
            "channel": {"kind": "bit_flip", "p": 0.8},
            "sample": {"n_qubits": 1, "count": 10, "seed": 1, "measure": "bloch_ball_uniform"}
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(ok).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.optimizer, OptimizerConfig::default());

        let typo = ok.replace("\"seed\"", "\"sed\"");
        assert!(serde_json::from_str::<ExperimentConfig>(&typo).is_err());

        let mut bad = cfg.clone();
        bad.format_version = 2;
        assert!(bad.validate().is_err());
        let mut bad = cfg.clone();
        bad.p_grid = vec![0.2, 1.5];
        assert!(bad.validate().is_err());
        let mut bad = cfg;
        bad.channel.n_qubits = 2;
        assert!(bad.validate().is_err());
    }
}
