//! Command-line surface (clap) and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use zetakit::Limits;

use crate::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "zetakit", version, about = "Zeta functions, exponential sums and Dwork operators over small finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every randomized step; recorded in the report.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Largest point set a single enumeration may visit.
    #[arg(long, global = true, env = "ZETAKIT_CAP", default_value_t = Limits::default().enumeration_cap)]
    pub cap: u64,
    /// Largest ambient point set used by the dimension estimator.
    #[arg(long, global = true, env = "ZETAKIT_DIMENSION_CAP", default_value_t = Limits::default().dimension_cap)]
    pub dimension_cap: u64,
    /// Pointwise certification runs over F_{q^s}, s ≤ this.
    #[arg(long, global = true, default_value_t = Limits::default().s_max)]
    pub s_max: u32,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, env = "ZETAKIT_THREADS")]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall-clock timing (makes reports non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    Affine,
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Campaign {
    Cancellation,
    InclusionExclusion,
    Delta,
    Axkatz,
    TraceFormula,
    Slopes,
    Recombination,
    BoundInvariants,
    All,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Count F_{q^m}-points of Z(f_i : i ∈ subset).
    Count {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
        /// 1-based polynomial indices (default: all).
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        /// Extension degree: count over F_{q^m}.
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_enum, default_value_t = RegionArg::Affine)]
        region: RegionArg,
    },
    /// Zeta series from counts, optionally reconstructed as P/Q.
    Zeta {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
        /// Number of counts N_1, …, N_terms.
        #[arg(long)]
        terms: u32,
        /// Padé degree bound to start from (escalates up to terms/2).
        #[arg(long)]
        reconstruct: Option<usize>,
        #[arg(long, value_enum, default_value_t = RegionArg::Affine)]
        region: RegionArg,
    },
    /// Toric exponential sums of the Dwork polynomial g = Σ y_i f_i.
    Expsum {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
        /// Compute S*_m for m ≤ this.
        #[arg(long)]
        terms: u32,
        /// Also evaluate the point-count side of the identity per m.
        #[arg(long)]
        check_identity: bool,
    },
    /// Divisibility exponents μ, ν, ε and the cohomology-degree window.
    Bounds {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
        /// Override dim Z instead of estimating it.
        #[arg(long, allow_hyphen_values = true)]
        dim: Option<i32>,
        /// Use the projective-variety form of the exponents.
        #[arg(long)]
        projective: bool,
    },
    /// Ax–Katz divisibility of counts and Newton slopes of ζ.
    Axkatz {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
        /// Number of counts N_1, …, N_terms.
        #[arg(long)]
        terms: u32,
        /// Padé degree bound for reconstructing ζ.
        #[arg(long)]
        pade: usize,
    },
    /// Weak visibility of a factor in the zeta functions of Z and A^n∖Z.
    Visibility {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
        /// Integer coefficients, constant term first, e.g. "1,-3".
        #[arg(long, allow_hyphen_values = true)]
        factor: String,
        /// Shift range R (default n + r).
        #[arg(long)]
        range: Option<u32>,
        /// Number of counts used to reconstruct each ζ.
        #[arg(long, default_value_t = 8)]
        terms: u32,
        /// Padé degree bound to start from.
        #[arg(long, default_value_t = 1)]
        reconstruct: usize,
    },
    /// Truncated Dwork operator: traces, Fredholm determinant, checks.
    Dwork {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
        /// p-adic precision M (working modulo p^M).
        #[arg(long)]
        precision: u32,
        /// Truncation degree D of the monomial basis.
        #[arg(long)]
        degree: u32,
        /// Compute Tr(α^m) for m ≤ this.
        #[arg(long)]
        traces: u32,
        /// 1-based variable indices I of g (basis x^I·B).
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        /// Compare (q^m − 1)^N Tr(α^m) with the exponential sums S*_m.
        #[arg(long)]
        verify_trace_formula: bool,
        /// Check the first Newton slope against the weight bound.
        #[arg(long)]
        check_slopes: bool,
        /// Use the system's single polynomial as g itself instead of Σ y_i f_i.
        #[arg(long)]
        direct: bool,
    },
    /// Recombine the system into a set-theoretic complete intersection.
    Recombine {
        /// System file (JSON).
        #[arg(long)]
        system: PathBuf,
    },
    /// Run a named verification campaign.
    Verify {
        /// Campaign to run.
        #[arg(long, value_enum)]
        campaign: Campaign,
        /// Number of random systems/profiles (campaign-specific default).
        #[arg(long)]
        count: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Zeta { .. } => "zeta",
            Command::Expsum { .. } => "expsum",
            Command::Bounds { .. } => "bounds",
            Command::Axkatz { .. } => "axkatz",
            Command::Visibility { .. } => "visibility",
            Command::Dwork { .. } => "dwork",
            Command::Recombine { .. } => "recombine",
            Command::Verify { .. } => "verify",
        }
    }

    pub fn system_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Count { system, .. }
            | Command::Zeta { system, .. }
            | Command::Expsum { system, .. }
            | Command::Bounds { system, .. }
            | Command::Axkatz { system, .. }
            | Command::Visibility { system, .. }
            | Command::Dwork { system, .. }
            | Command::Recombine { system } => Some(system),
            Command::Verify { .. } => None,
        }
    }
}

/// The validated configuration a run executes with.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub seed: u64,
    pub limits: Limits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub format: Format,
    #[serde(skip)]
    pub timing: bool,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let g = &cli.global;
        if g.cap == 0 || g.dimension_cap == 0 || g.s_max == 0 {
            return Err(CliError::Input("caps must be positive".into()));
        }
        if g.threads == Some(0) {
            return Err(CliError::Input("--threads must be positive".into()));
        }
        let limits = Limits {
            enumeration_cap: g.cap,
            dimension_cap: g.dimension_cap.min(g.cap),
            s_max: g.s_max,
            ..Limits::default()
        };
        Ok(RunConfig {
            command: cli.command.name(),
            seed: g.seed,
            limits,
            threads: g.threads,
            format: g.format,
            timing: g.timing,
            output: g.output.clone(),
        })
    }
}

/// Parses a comma-separated integer list such as "1,-3,0,9".
pub fn parse_int_list(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| CliError::Input(format!("bad integer {t:?} in {s:?}: {e}"))))
        .collect()
}

/// Converts 1-based indices to 0-based, checking the range 1..=len.
pub fn zero_based(indices: &[usize], len: usize, what: &str) -> CliResult<Vec<usize>> {
    indices
        .iter()
        .map(|&i| {
            if i == 0 || i > len {
                Err(CliError::Input(format!("{what} index {i} outside 1..={len}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}
