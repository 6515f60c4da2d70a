//! ffstats: experiment runner for square-full polynomial statistics.
//!
//! Exit codes: 0 when every identity check in the run passed, 1 when any
//! check failed, 2 on configuration errors.

mod commands;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

/// Inclusive degree range: either one value `5` or a span `2..8`.
#[derive(Debug, Clone, Copy)]
pub struct NRange {
    pub start: usize,
    pub end: usize,
}

impl NRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some((a, b)) = s.split_once("..") {
            let start = a
                .trim()
                .parse()
                .map_err(|_| format!("bad range start {a:?}"))?;
            let end = b
                .trim()
                .parse()
                .map_err(|_| format!("bad range end {b:?}"))?;
            if end < start {
                return Err(format!("range end {end} is below start {start}"));
            }
            Ok(NRange { start, end })
        } else {
            let v = s
                .trim()
                .parse()
                .map_err(|_| format!("bad degree value {s:?}"))?;
            Ok(NRange { start: v, end: v })
        }
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairFamily {
    Exterior,
    Symmetric,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Primitive odd characters mod a squarefree modulus
    OddPrimitive,
    /// Primitive even characters mod a power of T
    EvenPrimitive,
    /// Characters whose 2nd, 3rd, and 6th powers are all primitive with one parity
    SixthPower,
}

#[derive(Parser, Debug)]
#[command(
    name = "ffstats",
    version,
    about = "Statistics of square-full polynomials over F_q[T]: counts, variances, L-functions, and random-matrix checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Omit timestamp and runtime so identical configs give identical bytes
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Worker threads (default: all cores; also FFSTATS_WORKERS). Affects
    /// execution only; reports never record it, so output bytes match
    /// across worker counts.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Square-full counts by degree: exact series coefficients vs brute force
    Count {
        #[arg(long)]
        q: u64,
        /// Largest degree tabulated
        #[arg(long = "n-max")]
        n_max: usize,
    },
    /// Variance of square-full counts over invertible residue classes mod a prime Q
    Ap {
        #[arg(long)]
        q: u64,
        /// Modulus, e.g. T^3+2T+1
        #[arg(long = "Q")]
        modulus: String,
        /// Degree or inclusive degree range, e.g. 4 or 2..8
        #[arg(long)]
        n: NRange,
    },
    /// Variance of square-full counts over short intervals
    Si {
        #[arg(long)]
        q: u64,
        /// Degree or inclusive degree range
        #[arg(long)]
        n: NRange,
        /// Interval parameter: intervals have q^{h+1} elements
        #[arg(long)]
        h: usize,
    },
    /// Leading-exponent table for the constrained power sum S(n)
    Sn {
        #[arg(long = "n-max")]
        n_max: usize,
        /// Largest box bound N
        #[arg(long = "N-max")]
        cap_max: usize,
    },
    /// L-polynomials mod Q: inverse-root moduli, trivial zeros, orthogonality
    Lfun {
        #[arg(long)]
        q: u64,
        #[arg(long = "Q")]
        modulus: String,
    },
    /// Monte-Carlo unitary-group integrals
    Rmt {
        /// Matrix dimension (pair mode) or box bound (triple mode)
        #[arg(long = "N")]
        dim: usize,
        /// Run the trace-orthogonality pair grid for this family
        #[arg(long, value_enum)]
        pairs: Option<PairFamily>,
        /// Largest representation index in the pair grid
        #[arg(long = "j-max", default_value_t = 3)]
        j_max: usize,
        /// Degree of the triple integral (with --q, selects triple mode)
        #[arg(long)]
        n: Option<usize>,
        /// Weight base of the triple integral
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Frobenius equidistribution moments vs Haar
    Equidist {
        #[arg(long)]
        q: u64,
        #[arg(long = "Q")]
        modulus: String,
        #[arg(long, value_enum)]
        family: FamilyArg,
    },
}

/// Configuration problems reported on exit code 2. Identity-check failures
/// are not errors; they travel in the report and set exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn effective_workers(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var("FFSTATS_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(k) = effective_workers(cli.workers) {
        if k == 0 {
            eprintln!("error: worker count must be positive");
            return ExitCode::from(2);
        }
        // build_global fails only if a pool already exists; fine to ignore
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }

    let started = std::time::Instant::now();
    let result = commands::run(&cli.cmd);
    match result {
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Ok(out) => {
            let all_passed = out.checks.iter().all(|c| c.passed);
            let rendered = report::render(&cli, out, started.elapsed());
            match report::emit(&cli, rendered) {
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                Ok(()) => {
                    if all_passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parses_single_and_span() {
        let r: NRange = "5".parse().unwrap();
        assert_eq!((r.start, r.end), (5, 5));
        let r: NRange = "2..8".parse().unwrap();
        assert_eq!((r.start, r.end), (2, 8));
        assert_eq!(r.iter().count(), 7);
        assert_eq!(r.to_string(), "2..8");
        assert!("8..2".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
    }

    #[test]
    fn cli_parses_spec_shapes() {
        Cli::parse_from(["ffstats", "count", "--q", "3", "--n-max", "8"]);
        Cli::parse_from([
            "ffstats", "ap", "--q", "5", "--Q", "T^2+2", "--n", "2..8", "--format", "csv",
        ]);
        Cli::parse_from(["ffstats", "si", "--q", "3", "--n", "7", "--h", "2"]);
        Cli::parse_from(["ffstats", "sn", "--n-max", "60", "--N-max", "8"]);
        Cli::parse_from([
            "ffstats", "rmt", "--N", "4", "--pairs", "exterior", "--samples", "100000", "--seed",
            "7",
        ]);
        Cli::parse_from([
            "ffstats",
            "equidist",
            "--q",
            "13",
            "--Q",
            "T^2+2",
            "--family",
            "odd-primitive",
            "--deterministic",
        ]);
    }
}
