use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kraus_sphere::experiment::{self, ExperimentConfig};
use kraus_sphere::{sample_states, Error, Measure, SampleConfig};

/// Learn quasi-inverse channels on the Kraus sphere.
#[derive(Parser)]
#[command(name = "kraus-sphere", version)]
struct Cli {
    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn one quasi-inverse channel.
    Learn {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep the noise strength over the config's p_grid and write curve.csv.
    Curve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Report completeness and Kraus weights of a saved channel.
    Validate { path: PathBuf },
    /// Write a sampled state ensemble as JSON.
    Sample {
        /// Take the sample section of an experiment config instead of the flags below.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        qubits: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, value_enum, default_value_t = MeasureArg::BlochBallUniform)]
        measure: MeasureArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (defaults to states.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum MeasureArg {
    BlochBallUniform,
    Bures,
}

fn load(config: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(out) = out {
        cfg.output_dir = out;
    }
    if let Some(seed) = seed {
        cfg.sample.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Learn { config, out, seed } => {
            let cfg = load(&config, out, seed)?;
            let result = experiment::run_single(&cfg)?;
            if !quiet {
                println!(
                    "fidelity {:.4} -> {:.4} in {} iterations; wrote {}",
                    result.fidelity_before,
                    result.fidelity_after,
                    result.iterations_used(),
                    cfg.output_dir.display()
                );
            }
        }
        Command::Curve { config, out, seed } => {
            let cfg = load(&config, out, seed)?;
            let rows = experiment::run_curve(&cfg)?;
            if !quiet {
                println!("{}", experiment::CURVE_HEADER);
                for row in &rows {
                    println!("{}", row.to_csv_line());
                }
            }
        }
        Command::Validate { path } => {
            let report = experiment::validate_channel_file(&path)?;
            if !quiet {
                println!("{report}");
            }
            if !report.is_complete() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Sample { config, qubits, count, measure, seed, out } => {
            let mut sample = match config {
                Some(path) => ExperimentConfig::load(&path)?.sample,
                None => SampleConfig {
                    n_qubits: qubits,
                    count,
                    seed: 0,
                    measure: match measure {
                        MeasureArg::BlochBallUniform => Measure::BlochBallUniform,
                        MeasureArg::Bures => Measure::Bures,
                    },
                },
            };
            if let Some(seed) = seed {
                sample.seed = seed;
            }
            let states = sample_states(&sample)?;
            let out = out.unwrap_or_else(|| PathBuf::from("states.json"));
            experiment::write_states(&out, &states)?;
            if !quiet {
                println!("wrote {} states to {}", states.len(), out.display());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
