use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "mellin",
    version,
    about = "Mellin transforms, size biasing, stationary excess and log-normal limit laws"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every subcommand. Unused flags are ignored, and grids
/// left unset fall back to each command's default.
#[derive(Debug, Args)]
pub struct Common {
    /// Distribution spec: JSON, or a CSV survival table `x,S(x)`.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    /// Target mean of the limit law.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    /// Order grid, `lo:hi:step`, a comma list or a single value.
    #[arg(long = "t", global = true, value_name = "GRID", allow_hyphen_values = true)]
    pub t: Option<Grid>,

    /// Mellin argument grid, same forms as `--t`.
    #[arg(
        long,
        alias = "lambda-grid",
        global = true,
        value_name = "GRID",
        allow_hyphen_values = true
    )]
    pub lambda: Option<Grid>,

    /// Step `s` for semigroup and `c` estimates.
    #[arg(long, global = true)]
    pub s: Option<f64>,

    /// Sample size, or the number of random draws for `check-suite`.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Write the primary artifact to this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    Auto,
    Survival,
    Density,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mellin transform table over the lambda grid.
    Mellin {
        /// Evaluation path; `auto` prefers closed forms.
        #[arg(long, value_enum, default_value_t = PathChoice::Auto)]
        path: PathChoice,
    },
    /// Size-biased laws with their Mellin tables and property checks.
    Bias,
    /// Stationary excess laws with semigroup and fixed-point checks.
    Excess {
        /// Also compare `n` unit steps against one step of order `n`.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// t-monotone certificates and the recovered mixing transform.
    Tmono {
        /// Difference order; defaults to floor(t), at most 6.
        #[arg(long)]
        k: Option<usize>,
        /// Treat the spec as the mixing law Y and test `beta_t · Y`.
        #[arg(long)]
        mix: bool,
        /// Check a tabulated density `x,f(x)` instead of a spec.
        #[arg(long, value_name = "PATH")]
        density_csv: Option<PathBuf>,
    },
    /// Convergence report for the normalized families.
    Limit,
    /// Levy exponent table, correction decay and c estimates.
    Levy,
    /// Every seeded property battery.
    CheckSuite,
    /// Seeded sample batch.
    Sample,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mellin { .. } => "mellin",
            Command::Bias => "bias",
            Command::Excess { .. } => "excess",
            Command::Tmono { .. } => "tmono",
            Command::Limit => "limit",
            Command::Levy => "levy",
            Command::CheckSuite => "check-suite",
            Command::Sample => "sample",
        }
    }
}

/// A strictly increasing list of finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |v: &str| -> Result<f64, String> {
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| format!("`{v}` is not a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("`{v}` is not finite"))
            }
        };
        let values = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 && parts.len() != 2 {
                return Err(format!("range `{s}` must look like lo:hi:step"));
            }
            let (lo, hi) = (num(parts[0])?, num(parts[1])?);
            if !(hi > lo) {
                return Err(format!("range `{s}` is empty"));
            }
            let Some(step) = parts.get(2) else {
                return Err(format!("range `{s}` needs a step, as in lo:hi:step"));
            };
            let step = num(step)?;
            if !(step > 0.0) {
                return Err(format!("range `{s}` needs a positive step"));
            }
            let count = ((hi - lo) / step + 1e-9).floor();
            if count > 1e6 {
                return Err(format!("range `{s}` has more than a million points"));
            }
            (0..=count as usize)
                .map(|k| tidy(lo + k as f64 * step))
                .collect()
        } else {
            s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err("grid is empty".into());
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(format!("grid `{s}` must be strictly increasing"));
        }
        Ok(Grid(values))
    }
}

/// Rounds to 12 significant digits so `0.1 * 3` prints as `0.3`.
fn tidy(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}
