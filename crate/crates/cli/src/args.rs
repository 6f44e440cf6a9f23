use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Clone, Debug, Parser)]
#[command(
    name = "qforms",
    version,
    about = "Exact linear forms and certified linear independence measures for q-series values"
)]
pub struct Cli {
    /// Worker threads for parallel work; defaults to the number of cores.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write grid rows as CSV (bounds and scan only).
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct SpecArg {
    /// Spec file (JSON).
    pub spec: PathBuf,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Check every side condition on the spec.
    Validate(SpecArg),
    /// S, eps0, gamma, M, mu, applicability and the clearing denominator.
    Params(SpecArg),
    /// u_n, v_n, v_{l,n} and w_{l,n} with their heights.
    Forms {
        #[arg(long = "l")]
        l: u32,
        #[arg(long = "n")]
        n: u32,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Exact identity suite.
    Verify {
        #[arg(long, default_value_t = 100)]
        n_max: u32,
        /// Defaults to d + 3.
        #[arg(long)]
        l_max: Option<u32>,
        #[arg(long, default_value_t = 100)]
        series_n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Height and smallness rows over an (l, n) grid.
    Bounds {
        /// Values of l: comma-separated integers or inclusive ranges `a..b`.
        #[arg(long = "l", default_value = "0..5")]
        l: String,
        /// Values of n, same syntax.
        #[arg(long = "n", default_value = "0..60")]
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_heights: bool,
        #[arg(long)]
        no_smallness: bool,
        /// Fail when the fitted height constant exceeds this.
        #[arg(long, default_value = "10")]
        kappa_max: String,
        /// Fail when the fitted smallness constant exceeds this.
        #[arg(long, default_value = "10")]
        c_max: String,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// First n in [n0, n0 + dS] with v_{l0,n}(omega) certifiably nonzero.
    Nonvanish {
        #[arg(long)]
        l0: u32,
        #[arg(long)]
        n0: u32,
        /// All 1 + dS coordinates of omega, exact rationals.
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "values",
            required_unless_present = "values"
        )]
        omega: Option<String>,
        /// The dS value coordinates; omega_0 is taken from the series values.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Certified lower bound for |A_0 + sum A f(...)|.
    Certify {
        /// Integer vector `a0,a1,...` of length 1 + dS.
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        /// Start from this l instead of the automatic choice.
        #[arg(long = "l")]
        l: Option<u32>,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Empirical exponents of minimal |Lambda| per height class.
    Scan {
        #[arg(long)]
        hmax: u64,
        /// Sample this many vectors per class instead of enumerating.
        #[arg(long, value_name = "K")]
        random: Option<u32>,
        #[arg(long, default_value_t = 0, requires = "random")]
        seed: u64,
        /// Pass when the maximal exponent is at most mu + slack.
        #[arg(long, default_value = "1")]
        slack: String,
        #[command(flatten)]
        spec: SpecArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Params(_) => "params",
            Command::Forms { .. } => "forms",
            Command::Verify { .. } => "verify",
            Command::Bounds { .. } => "bounds",
            Command::Nonvanish { .. } => "nonvanish",
            Command::Certify { .. } => "certify",
            Command::Scan { .. } => "scan",
        }
    }

    pub fn spec_path(&self) -> &std::path::Path {
        match self {
            Command::Validate(s) | Command::Params(s) => &s.spec,
            Command::Forms { spec, .. }
            | Command::Verify { spec, .. }
            | Command::Bounds { spec, .. }
            | Command::Nonvanish { spec, .. }
            | Command::Certify { spec, .. }
            | Command::Scan { spec, .. } => &spec.spec,
        }
    }
}

/// Parses `"0..3,7,9..10"` into `[0, 1, 2, 3, 7, 9, 10]` (ranges inclusive).
pub fn parse_index_list(src: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in src.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad index {s:?} in {src:?}: {e}"))
        };
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(format!("no indices in {src:?}"));
    }
    Ok(out)
}
