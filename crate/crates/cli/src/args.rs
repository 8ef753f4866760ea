use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellgen::Complex64;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "ellgen",
    version,
    about = "Elliptic genera, Jacobi sine and fixed-point data"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Lattice file: `{"omega1": [re, im], "omega2": [re, im]}`
    #[arg(long, global = true)]
    pub lattice: Option<PathBuf>,
    /// Input document (see docs/schema.json)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Series truncation order
    #[arg(long, global = true)]
    pub truncation: Option<i32>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run grid evaluations on the calling thread only
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate or expand the Jacobi sine
    Sine(SineArgs),
    /// Equivariant elliptic genus from fixed-point data
    Genus(GenusArgs),
    /// Transfer-lift certificates at a torsion point
    Transfer(TransferArgs),
    /// Local exponents and divisor for the S²(n) example
    Sheaf(SheafArgs),
    /// Symmetric-function expansion of a unital series
    Symfun(SymfunArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SineArgs {
    /// Point to evaluate at, `re` or `re,im`; repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Vec<String>,
    /// Taylor order at the origin
    #[arg(long)]
    pub taylor: Option<i32>,
    /// Check oddness, (anti)periodicity, s'(0) and the zero/pole census
    #[arg(long)]
    pub check_periods: bool,
    /// Number of random points for --check-periods
    #[arg(long, default_value_t = 100)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenusArgs {
    /// Run the rigidity check on a grid of this many points
    #[arg(long)]
    pub grid: Option<usize>,
    /// Grid radius as a multiple of |ω₁|
    #[arg(long)]
    pub radius: Option<f64>,
    /// Laurent order at u = 0
    #[arg(long)]
    pub taylor: Option<i32>,
    /// Run the rigidity check with the default grid
    #[arg(long)]
    pub rigidity: bool,
    /// Explicit sample point `re` or `re,im` replacing the grid; repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub at: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransferArgs {
    /// Torsion point as coordinates `x,y` in the (ω₁, ω₂) basis, fractions allowed
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Exact order n; alone it selects α = ω₁/n
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SheafArgs {
    /// Rotation number n of S²(n)
    #[arg(long, allow_hyphen_values = true)]
    pub s2n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesChoice {
    OnePlusX,
    InverseOnePlusX,
    SineOverX,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SymfunArgs {
    #[arg(long, value_enum, default_value_t = SeriesChoice::SineOverX)]
    pub q: SeriesChoice,
    /// Explicit coefficients of Q from x^0 on, as a JSON list of numbers or [re, im] pairs
    #[arg(long)]
    pub coefficients: Option<String>,
    /// Number of roots
    #[arg(long, default_value_t = 3)]
    pub roots: usize,
    /// Total degree bound (defaults to the truncation order)
    #[arg(long)]
    pub bound: Option<usize>,
    /// Random-root trials comparing Π Q(x_j) with the expansion
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    /// Roots are drawn from the disc of this radius
    #[arg(long, default_value_t = 0.1)]
    pub root_radius: f64,
}

fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        let q: f64 = q.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        if q == 0.0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(p / q);
    }
    s.parse().map_err(|_| format!("bad number {s:?}"))
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    match s.split_once(',') {
        Some((a, b)) => Ok(Complex64::new(number(a)?, number(b)?)),
        None => Ok(Complex64::new(number(s)?, 0.0)),
    }
}

/// `x,y`, each a decimal or a fraction `p/q`.
pub fn parse_coords(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,y coordinates, got {s:?}"))?;
    Ok((number(a)?, number(b)?))
}
