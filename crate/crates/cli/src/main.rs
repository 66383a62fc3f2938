//! `koszulator`: command-line front end.
//!
//! Exit status 0 when every requested check passes, 1 on a verification
//! failure (a JSON report is written), 2 on malformed input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "koszulator", version, about = "Resolutions of the residue field over complete intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct RingArgs {
    /// Ring file: `field`, `vars` and `gen` lines.
    #[arg(long)]
    pub ring: PathBuf,
    /// Cycle file overriding extraction: one `z p1, ..., pn` line per cycle.
    #[arg(long)]
    pub z: Option<PathBuf>,
    /// Internal degree up to which homology is computed.
    #[arg(long, default_value_t = 16)]
    pub max_degree: usize,
    /// Where to write the report on failure.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract, validate and print the cycles z_1..z_c.
    Cycles {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Print ζ^k for u = 1..n and check the chain-map identities.
    Zeta {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        k: usize,
        /// Print the induced maps on Koszul homology instead.
        #[arg(long)]
        homology_level: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        out: Format,
    },
    /// Build the mapping-cone tower M^0 ⊂ ... ⊂ M^J.
    Tower {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Assemble F up to homological degree imax.
    Resolve {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        imax: usize,
        #[arg(long)]
        verify_all: bool,
        /// Print the Betti table.
        #[arg(long)]
        betti: bool,
        /// Output directory for matrices, renderings and the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the divided-power maps μ^k.
    Divided {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        compare_zeta: bool,
    },
    /// Run every verification on one ring.
    VerifyAll {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 10)]
        imax: usize,
    },
    /// Export one differential or map.
    ExportMap {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_enum)]
        complex: ComplexKind,
        #[arg(long)]
        index: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Tower height for `--complex tower`.
        #[arg(long)]
        levels: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    Koszul,
    Resolution,
    Tower,
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("KOSZULATOR_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("KOSZULATOR_THREADS: not a thread count: {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Cycles { ring } => commands::cycles(&ring),
        Command::Zeta { ring, k, homology_level, out } => commands::zeta(&ring, k, homology_level, out),
        Command::Tower { ring, levels, verify } => commands::tower(&ring, levels, verify),
        Command::Resolve { ring, imax, verify_all, betti, out } => {
            commands::resolve(&ring, imax, verify_all, betti, out.as_deref())
        }
        Command::Divided { ring, k, compare_zeta } => commands::divided(&ring, k, compare_zeta),
        Command::VerifyAll { ring, imax } => commands::verify_all(&ring, imax),
        Command::ExportMap { ring, complex, index, format, levels } => {
            commands::export_map(&ring, complex, index, format, levels)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Verification(path)) => {
            eprintln!("verification failed; report written to {}", path.display());
            ExitCode::from(1)
        }
        Err(commands::Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
