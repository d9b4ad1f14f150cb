use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rsp_sim::cli::{cmd_sweep, cmd_timing, cmd_tomo, SweepArgs, TimingArgs, TomoArgs};
use rsp_sim::feedforward::Plane;

/// Simulator for fiber-compatible measurement-and-feed-forward remote state
/// preparation of polarization qubits.
#[derive(Parser)]
#[command(name = "rsp-sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaneArg {
    Meridian,
    Equatorial,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the protocol across a Bloch-plane grid and write CSV/JSON data.
    Sweep {
        /// Experiment config file (INI-style; .json files parse as JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Force JSON parsing of the config file.
        #[arg(long)]
        json: bool,
        /// Master seed; required, all randomness derives from it.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Preparation plane (overrides the config).
        #[arg(long, value_enum)]
        plane: Option<PlaneArg>,
        /// Feed-forward state (overrides the config).
        #[arg(long, value_enum)]
        feedforward: Option<OnOff>,
        /// Reconstruct from exact Born probabilities instead of sampled
        /// counts.
        #[arg(long)]
        infinite_statistics: bool,
    },
    /// Reconstruct a density matrix from a coincidence-count CSV file.
    Tomo {
        /// Count file in the documented CSV format.
        counts: PathBuf,
        /// Hilbert-space dimension: 2 or 4.
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report fidelity to a named state: singlet, h, v, d, a, r or l.
        #[arg(long)]
        target: Option<String>,
    },
    /// Check the feed-forward timing budget and loss budget.
    Timing {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Force JSON parsing of the config file.
        #[arg(long)]
        json: bool,
        /// Emit the report as JSON.
        #[arg(long)]
        emit_json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Sweep {
            config,
            json,
            seed,
            out,
            plane,
            feedforward,
            infinite_statistics,
        } => cmd_sweep(&SweepArgs {
            config,
            json_config: json,
            seed,
            out,
            plane: plane.map(|p| match p {
                PlaneArg::Meridian => Plane::Meridian,
                PlaneArg::Equatorial => Plane::Equatorial,
            }),
            feedforward: feedforward.map(|f| matches!(f, OnOff::On)),
            infinite_statistics,
        }),
        Command::Tomo {
            counts,
            dim,
            out,
            target,
        } => cmd_tomo(&TomoArgs {
            counts,
            dim,
            out,
            target,
        }),
        Command::Timing {
            config,
            json,
            emit_json,
        } => cmd_timing(&TimingArgs {
            config,
            json_config: json,
            emit_json,
        }),
    };
    ExitCode::from(code as u8)
}
