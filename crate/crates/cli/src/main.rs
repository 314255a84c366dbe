//! Batch front end for the slice calculus: parse one JSON instance file,
//! dispatch the requested computation, and emit a deterministic TSV or JSON
//! report.  Exit codes: 0 pass, 1 check failed, 2 validation error,
//! 3 instability (a scan bound was reached before values settled).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kcech_cli::{commands, instance, CliError, Kind, Overrides, Which};

#[derive(Parser)]
#[command(
    name = "kcech",
    version,
    about = "Truncated Koszul/Čech complexes over monomial data: homology tables, \
             Hilbert–Samuel multiplicities, and stabilized colimit cohomology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert–Samuel lengths ℓ(M/qⁿM) with difference columns and e₀
    Hilbert {
        instance: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Check χ(K•(a; M)) = e₀((a); M) for a system of parameters
    VerifyMult1 {
        instance: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Check e₀((a); M) = (∏cᵢ)·e₀(q; M) + χ(K•(a, q, M; n)) at stable n
    VerifyMult2 {
        instance: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Homology table of one truncated complex plus invariant verdicts
    ComplexReport {
        instance: PathBuf,
        /// Complex to build: K, L, coK, or coL
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Stabilized colimit cohomology table (Ȟ, Ľ, or local cohomology)
    Cech {
        instance: PathBuf,
        /// Colimit to scan: H, L, or local
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Search witnesses (l, k) for the colon-intersection identity per element
    StarCheck {
        instance: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Saturation chain ((qⁿ⁺ᶜˡ + I) : aˡ) per element: pause stage, fullness
    Sat {
        instance: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Randomized χ ≥ 0 campaign over generated parameter systems
    Corpus {
        /// Number of instances to generate
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[command(flatten)]
        ov: Overrides,
    },
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Hilbert { instance, ov } => {
            commands::hilbert(&instance::load(&instance, &ov)?, ov.json)
        }
        Command::VerifyMult1 { instance, ov } => {
            commands::verify_mult1(&instance::load(&instance, &ov)?, ov.json)
        }
        Command::VerifyMult2 { instance, ov } => {
            commands::verify_mult2(&instance::load(&instance, &ov)?, ov.json)
        }
        Command::ComplexReport { instance, which, ov } => {
            commands::complex_report(&instance::load(&instance, &ov)?, which, ov.json)
        }
        Command::Cech { instance, kind, ov } => {
            commands::cech(&instance::load(&instance, &ov)?, kind, ov.json)
        }
        Command::StarCheck { instance, ov } => {
            commands::star_check(&instance::load(&instance, &ov)?, ov.json)
        }
        Command::Sat { instance, ov } => commands::sat(&instance::load(&instance, &ov)?, ov.json),
        Command::Corpus { size, ov } => {
            let field = instance::resolve_field(ov.prime)?;
            commands::corpus(size, ov.seed.unwrap_or(1), field, ov.json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
