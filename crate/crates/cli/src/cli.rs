use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Format;

const EXIT_CODES: &str = "\
Exit codes:
  0   success
  1   verification ran but at least one check missed its tolerance
  2   domain error (argument outside the mathematical domain)
  3   solver error (non-convergence, divergence, root collision)
  64  usage error (unknown command, malformed flags, unreadable config or input)";

#[derive(Debug, Parser)]
#[command(name = "spinchain", version, about = "Spectra, Mathieu tables, trajectories and checks for the quantized continuum Heisenberg chain", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Anisotropy A [config key: A, default 2]
    #[arg(long = "A", global = true, allow_negative_numbers = true)]
    pub anisotropy: Option<f64>,
    /// Transverse field B [config key: B, default 0]
    #[arg(long = "B", global = true, allow_negative_numbers = true)]
    pub field: Option<f64>,
    /// Gyromagnetic ratio [config key: mu, default 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Reduced Planck constant [config key: hbar, default 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    /// Seed for randomized searches and samplers [config key: seed]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format [config key: format, default csv]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output [config key: out]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Plain-text `key = value` file; flags override its entries
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map spins to the complex plane or back
    Project(ProjectArgs),
    /// Integrate the static Hamilton equations in z (RK4)
    Classical(ClassicalArgs),
    /// Bethe-ansatz levels n = 0..max-n with energies and root sets (B = 0)
    Spectrum(SpectrumArgs),
    /// Individual Bethe roots of level n, every branch
    Roots(RootsArgs),
    /// Mathieu characteristic value and optional samples of ce/se
    Mathieu(MathieuArgs),
    /// Off-plane energy table
    Offplane(TableArgs),
    /// In-plane energy table
    Inplane(TableArgs),
    /// Residual and oracle checks with a pass/fail table
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ProjectArgs {
    /// Spin vector S1,S2,S3 (unit norm)
    #[arg(long, value_parser = parse_floats::<3>, allow_hyphen_values = true, value_name = "S1,S2,S3")]
    pub spin: Option<[f64; 3]>,
    /// Plane point P,Q
    #[arg(long, value_parser = parse_floats::<2>, allow_hyphen_values = true, value_name = "P,Q")]
    pub point: Option<[f64; 2]>,
    /// CSV file with columns S1,S2,S3 or P,Q
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub q0: f64,
    #[arg(long = "pi-p", default_value_t = 0.0, allow_negative_numbers = true)]
    pub pi_p: f64,
    #[arg(long = "pi-q", default_value_t = 0.0, allow_negative_numbers = true)]
    pub pi_q: f64,
    #[arg(long = "z-start", default_value_t = 0.0, allow_negative_numbers = true)]
    pub z_start: f64,
    #[arg(long = "z-end", default_value_t = 10.0, allow_negative_numbers = true)]
    pub z_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Emit every k-th node only (the last node is always emitted)
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub every: u64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "max-n", default_value_t = 3)]
    pub max_n: u32,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Ce,
    Se,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParitySet {
    Ce,
    Se,
    Both,
}

#[derive(Debug, Args)]
pub struct MathieuArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub nu: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = ParityArg::Ce)]
    pub parity: ParityArg,
    /// Number of equispaced samples of the function on [0, 2π)
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Exactly `N` comma-separated numbers.
pub fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

/// Orders as `a..b` (inclusive, unit step), `a..b:step`, or a comma list.
#[derive(Debug, Clone, PartialEq)]
pub struct Orders(pub Vec<f64>);

pub fn parse_orders(s: &str) -> Result<Orders, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (num(hi)?, num(step)?),
            None => (num(rest)?, 1.0),
        };
        let lo = num(lo)?;
        if step.is_nan() || step <= 0.0 || hi.is_nan() || lo.is_nan() || hi < lo {
            return Err(format!("range `{s}` needs lo <= hi and a positive step"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(format!("range `{s}` has too many entries"));
        }
        return Ok(Orders((0..count).map(|k| lo + k as f64 * step).collect()));
    }
    let list = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    Ok(Orders(list))
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_parser = parse_orders, default_value = "0..5", allow_hyphen_values = true)]
    pub orders: Orders,
    #[arg(long, value_enum, default_value_t = ParitySet::Ce)]
    pub parity: ParitySet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Radial,
    Mathieu,
    Nlsm,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Radial checks for this level only (default: levels 0..=max-n)
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "max-n", default_value_t = 3)]
    pub max_n: u32,
    /// Print pointwise residual profiles instead of the summary table
    #[arg(long)]
    pub profile: bool,
    /// Directory for one residual CSV per case
    #[arg(long = "residual-dir")]
    pub residual_dir: Option<PathBuf>,
}
