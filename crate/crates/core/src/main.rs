use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdamp::cli::{cmd_inspect, cmd_optimal, cmd_sweep, cmd_verify, CliError, Range, SweepSpec};
use qdamp::scenarios::BellKind;

#[derive(Parser)]
#[command(
    name = "qdamp",
    version,
    about = "Amplitude-damped Bell pairs: fidelity analysis, parameter sweeps, and built-in verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in verification suite and print one row per check
    Verify {
        /// Sample count for the sampling cross-check of the spectral FEF
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
    /// Sweep damping parameters and write CSV
    Sweep {
        /// Bell source: phi+, phi-, psi+, psi- (case-insensitive)
        #[arg(long)]
        source: String,
        /// Fixed p_b, combined with --pa-range
        #[arg(long)]
        pb: Option<f64>,
        /// p_b grid
        #[arg(long, value_name = "START:STOP:STEP")]
        pb_range: Option<String>,
        /// p_a grid
        #[arg(long, value_name = "START:STOP:STEP")]
        pa_range: Option<String>,
        /// Output CSV path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the optimal second damping for a given p_b
    Optimal {
        /// Damping strength already applied to the transmitted qubit
        #[arg(long)]
        pb: f64,
    },
    /// Print every stage of one damping scenario
    Inspect {
        /// Bell source: phi+, phi-, psi+, psi- (case-insensitive)
        source: String,
        /// Damping strength on the transmitted qubit
        pb: f64,
        /// Optional damping strength on Alice's qubit
        pa: Option<f64>,
    },
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    let stdout = std::io::stdout();
    match cli.command {
        Command::Verify { samples, seed } => {
            let mut lock = stdout.lock();
            Ok(cmd_verify(samples, seed, &mut lock)? as u8)
        }
        Command::Sweep {
            source,
            pb,
            pb_range,
            pa_range,
            out,
        } => {
            let source: BellKind = source.parse()?;
            let spec = match (pb_range, pb, pa_range) {
                (Some(br), None, None) => SweepSpec::OverPb {
                    source,
                    pb: Range::parse(&br)?,
                },
                (None, Some(pbv), Some(ar)) => SweepSpec::OverPaAtPb {
                    source,
                    pb: pbv,
                    pa: Range::parse(&ar)?,
                },
                (Some(br), None, Some(ar)) => SweepSpec::Grid {
                    source,
                    pb: Range::parse(&br)?,
                    pa: Range::parse(&ar)?,
                },
                _ => {
                    return Err(CliError::InvalidArguments(
                        "sweep needs --pb-range alone, --pb with --pa-range, \
                         or --pb-range with --pa-range"
                            .to_string(),
                    ))
                }
            };
            match out {
                Some(path) => {
                    let file = File::create(&path)?;
                    let mut writer = BufWriter::new(file);
                    cmd_sweep(&spec, &mut writer)?;
                    writer.flush()?;
                }
                None => {
                    let mut lock = stdout.lock();
                    cmd_sweep(&spec, &mut lock)?;
                }
            }
            Ok(0)
        }
        Command::Optimal { pb } => {
            let mut lock = stdout.lock();
            cmd_optimal(pb, &mut lock)?;
            Ok(0)
        }
        Command::Inspect { source, pb, pa } => {
            let source: BellKind = source.parse()?;
            let mut lock = stdout.lock();
            cmd_inspect(source, pb, pa, &mut lock)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
