use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fockherald::cli::{
    cmd_cascade, cmd_chain, cmd_cnot_sweep, cmd_suppression, cmd_tdm, cmd_validate, exit_code_for,
    parse_values, CommonOpts, OutputFormat, SweepModel,
};
use fockherald::schemes::{ChainConfig, TdmConfig};

#[derive(Parser)]
#[command(
    name = "fockherald",
    version,
    about = "Exact simulator for photon counting with non-discriminating detectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Chain,
    Nondiscriminating,
}

#[derive(Args)]
struct Common {
    /// Output directory for tables and manifests.
    #[arg(long, default_value = "out", global = true)]
    out: PathBuf,
    /// Seed for every randomized search.
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv, global = true)]
    format: FormatArg,
}

impl Common {
    fn opts(&self) -> CommonOpts {
        CommonOpts {
            out_dir: self.out.clone(),
            seed: self.seed,
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Probability of perceiving one photon over a detector grid.
    Suppression {
        #[command(flatten)]
        common: Common,
        /// Detector efficiencies (comma list or start:stop:count).
        #[arg(long = "eta-eff", default_value = "0.8,0.9,0.99")]
        eta_eff: String,
        /// First-stage reflectivities.
        #[arg(long = "eta-ref", default_value = "0.011,0.1,0.5")]
        eta_ref: String,
        /// Largest incident photon number.
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    /// Cascade counting: click distributions and the correct-count closed form.
    Cascade {
        #[command(flatten)]
        common: Common,
        /// Output port counts (powers of two).
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 8, 16])]
        outputs: Vec<u32>,
        #[arg(long = "eta-eff", default_value = "0.8,0.9,1.0")]
        eta_eff: String,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
    },
    /// Time-multiplexed counting through a lossy fiber loop.
    Tdm {
        #[command(flatten)]
        common: Common,
        /// Out-coupling probability per round trip.
        #[arg(long, default_value_t = 0.5)]
        coupling: f64,
        /// Loop survival probability per round trip.
        #[arg(long = "loop-transmission", default_value_t = 1.0)]
        loop_transmission: f64,
        #[arg(long = "round-trips", default_value_t = 4)]
        round_trips: u32,
        #[arg(long = "eta-eff", default_value_t = 1.0)]
        eta_eff: f64,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
    /// Conditioned chain detector acceptance probabilities.
    Chain {
        #[command(flatten)]
        common: Common,
        /// Number of conditioned reflected ports.
        #[arg(short, long, default_value_t = 1)]
        k: u32,
        #[arg(long = "eta-ref", default_value_t = 0.1)]
        eta_ref: f64,
        #[arg(long = "eta-eff", default_value_t = 0.9)]
        eta_eff: f64,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    /// Worst-case CNOT fidelity and success probability over a detector grid.
    CnotSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long = "eta-eff", default_value = "0.99")]
        eta_eff: String,
        #[arg(long = "eta-ref", default_value = "0.011")]
        eta_ref: String,
        #[arg(long = "detector-model", value_enum, default_value_t = ModelArg::Chain)]
        detector_model: ModelArg,
        /// Evaluate only the sixteen fixed probe inputs.
        #[arg(long = "probes-only", default_value_t = false)]
        probes_only: bool,
        /// Gate layout JSON; defaults to the calibrated shipped gate.
        #[arg(long = "gate-config")]
        gate_config: Option<PathBuf>,
    },
    /// Run every agreement suite and the gate calibration.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long = "gate-config")]
        gate_config: Option<PathBuf>,
    },
}

fn init_thread_pool() {
    if let Ok(text) = std::env::var("FOCKHERALD_THREADS") {
        if let Ok(threads) = text.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(cli: Cli) -> fockherald::Result<bool> {
    match cli.command {
        Command::Suppression {
            common,
            eta_eff,
            eta_ref,
            n_max,
        } => {
            cmd_suppression(
                &common.opts(),
                &parse_values(&eta_eff)?,
                &parse_values(&eta_ref)?,
                n_max,
            )?;
            Ok(true)
        }
        Command::Cascade {
            common,
            outputs,
            eta_eff,
            n_max,
        } => {
            cmd_cascade(&common.opts(), &outputs, &parse_values(&eta_eff)?, n_max)?;
            Ok(true)
        }
        Command::Tdm {
            common,
            coupling,
            loop_transmission,
            round_trips,
            eta_eff,
            n_max,
        } => {
            let cfg = TdmConfig {
                coupling,
                loop_transmission,
                round_trips,
                eta_eff,
            };
            cmd_tdm(&common.opts(), &cfg, n_max)?;
            Ok(true)
        }
        Command::Chain {
            common,
            k,
            eta_ref,
            eta_eff,
            n_max,
        } => {
            let cfg = ChainConfig {
                k,
                eta_ref,
                eta_eff,
            };
            cmd_chain(&common.opts(), &cfg, n_max)?;
            Ok(true)
        }
        Command::CnotSweep {
            common,
            eta_eff,
            eta_ref,
            detector_model,
            probes_only,
            gate_config,
        } => {
            let model = match detector_model {
                ModelArg::Chain => SweepModel::Chain,
                ModelArg::Nondiscriminating => SweepModel::NonDiscriminating,
            };
            cmd_cnot_sweep(
                &common.opts(),
                gate_config.as_deref(),
                model,
                &parse_values(&eta_eff)?,
                &parse_values(&eta_ref)?,
                probes_only,
            )?;
            Ok(true)
        }
        Command::Validate {
            common,
            gate_config,
        } => cmd_validate(&common.opts(), gate_config.as_deref()),
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code_for(&error) as u8)
        }
    }
}
