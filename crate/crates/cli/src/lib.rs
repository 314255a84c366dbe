//! Library surface of the batch front end: instance-file parsing and
//! validation, report assembly, and the command implementations.  The `kcech`
//! binary is a thin clap wrapper around this crate; keeping the logic in a
//! library makes the parsing entry points reachable from fuzz targets and
//! integration tests.

pub mod commands;
pub mod instance;
pub mod report;

use clap::{Args, ValueEnum};

pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: 2 }
    }
}

impl From<kcech::Error> for CliError {
    fn from(e: kcech::Error) -> Self {
        use kcech::Error;
        let code = match &e {
            Error::Unstable(_) | Error::NoStabilization(_) => 3,
            Error::Disagreement(_) | Error::RadicalMismatch | Error::Invariant(_) => 1,
            _ => 2,
        };
        CliError { message: e.to_string(), code }
    }
}

/// Flag overrides: every instance-file parameter can also be set here, and
/// flags win over file values.
#[derive(Args, Default)]
pub struct Overrides {
    /// Truncation level n (command-specific default when omitted)
    #[arg(long)]
    pub n: Option<i64>,
    /// Width of the n-window that star-check verifies per witness
    #[arg(long = "n-span")]
    pub n_span: Option<u32>,
    /// Internal-degree bound E for slice scans
    #[arg(long = "max-degree", value_name = "E")]
    pub max_degree: Option<i64>,
    /// Stability window width
    #[arg(long, value_name = "W")]
    pub window: Option<u32>,
    /// Number of colimit stages scanned
    #[arg(long = "k-max")]
    pub k_max: Option<u32>,
    /// Bound on saturation and witness exponents l
    #[arg(long = "l-max")]
    pub l_max: Option<u32>,
    /// Field characteristic (a prime below 2^31)
    #[arg(long)]
    pub prime: Option<u64>,
    /// Meaning of q^j for j <= 0: the unit ideal or the zero ideal
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
    /// Seed for randomized campaigns
    #[arg(long)]
    pub seed: Option<u64>,
    /// Emit one structured JSON document instead of TSV
    #[arg(long)]
    pub json: bool,
}

#[derive(Copy, Clone, ValueEnum)]
pub enum ConventionArg {
    Unit,
    Zero,
}

impl ConventionArg {
    pub fn as_str(self) -> &'static str {
        match self {
            ConventionArg::Unit => "unit",
            ConventionArg::Zero => "zero",
        }
    }
}

/// Which truncated complex `complex-report` builds.
#[derive(Copy, Clone, ValueEnum)]
pub enum Which {
    /// Chain subcomplex with terms q^{n−Σc}·M
    #[value(name = "K")]
    K,
    /// Chain quotient complex with terms M/q^{n−Σc}M
    #[value(name = "L")]
    L,
    /// Cochain subcomplex with terms q^{n+Σc}·M
    #[value(name = "coK")]
    CoK,
    /// Cochain quotient complex with terms M/q^{n+Σc}M
    #[value(name = "coL")]
    CoL,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::K => "K",
            Which::L => "L",
            Which::CoK => "coK",
            Which::CoL => "coL",
        }
    }
}

/// Which stabilized colimit `cech` scans.
#[derive(Copy, Clone, ValueEnum)]
pub enum Kind {
    /// Colimit of the cochain subcomplexes over powers of the elements
    #[value(name = "H")]
    H,
    /// Colimit of the cochain quotient complexes
    #[value(name = "L")]
    L,
    /// Local cohomology of the module at the ideal generated by the elements
    #[value(name = "local")]
    Local,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::H => "H",
            Kind::L => "L",
            Kind::Local => "local",
        }
    }
}
