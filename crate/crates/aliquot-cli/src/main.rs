//! `alq` — censuses, classifications, and exact constants for integers
//! sorted by how far σ(n) strays from ℓ·n, with CSV/JSON reports.
//!
//! Every subcommand streams a deterministic segmented sieve, so output bytes
//! are identical across runs and thread counts. Exit codes: 0 success,
//! 1 usage or invalid argument, 2 computation budget exceeded, 3 a witness
//! search ran out of nodes and left a profile row undecided.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use aliquot_core::arith::{
    sieve_range_cached, sieve_range_with_bound, DEFAULT_SIEVE_BOUND, MAX_SIEVE_BOUND,
};
use aliquot_core::densities::{empirical_distribution, greedy_admissible, m_lower_bound};
use aliquot_core::nearperfect::{
    census_exact, census_exact_intersection, census_near, profile_with_budget, ratio_e_eps,
    verify_counting_lemma, NearPerfectProfile, SearchBudget,
};
use aliquot_core::report::{
    constants_json, distribution_table, format_fixed, near_table, sieve_table, spikes_table,
    table1, table2, within_series, within_table, ConstantsConfig, Table,
};
use aliquot_core::threshold::{Ell, ThresholdSpec};
use aliquot_core::within::{count_almost, count_within, spike_scan};
use aliquot_core::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};

/// Scans above this cutoff must be requested explicitly with `--allow-large`.
const LARGE_SCAN_GUARD: u64 = 100_000_000;

#[derive(Parser)]
#[command(
    name = "alq",
    version,
    about = "Census toolkit for integers classified by divisor-sum behavior",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for segment scans (default: all cores). Results are
    /// byte-identical regardless.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for cached sieve segments (used by `sieve`).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Report encoding written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    output_format: Format,

    /// Permit scans past the default guard of 100000000.
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the arithmetic record (σ, τ, ω, Ω, φ, μ, P⁺, spf) of every n in a range.
    Sieve {
        /// First integer of the range.
        #[arg(long, default_value_t = 1)]
        lo: u64,
        /// Last integer of the range.
        #[arg(long)]
        x_max: u64,
    },
    /// Count n ≤ x with |σ(n) − ℓn| below a threshold function of n.
    Within {
        #[arg(long)]
        x_max: u64,
        /// Multiplier ℓ as an integer or a/b fraction.
        #[arg(long, default_value = "2")]
        ell: String,
        /// Threshold: constant:C, power:P/Q, linear:A/B, or y-over-log-y.
        #[arg(long)]
        threshold: String,
        /// Emit a time series sampled every STEP integers instead of one row.
        #[arg(long, value_name = "STEP")]
        series: Option<u64>,
    },
    /// Count n ≤ x with σ(n) = ℓn + k exactly.
    Almost {
        #[arg(long)]
        x_max: u64,
        /// Integer multiplier ℓ ≥ 2.
        #[arg(long, default_value = "2")]
        ell: String,
        /// Exact offset k of σ(n) − ℓn.
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Histogram of σ(n) − ℓn over a window of offsets, with spike ranks.
    Spikes {
        #[arg(long)]
        x_max: u64,
        /// Integer multiplier ℓ ≥ 1.
        #[arg(long, default_value = "2")]
        ell: String,
        #[arg(long, allow_negative_numbers = true)]
        k_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        k_max: i64,
    },
    /// Profile every n ≤ x that is a sum of its proper divisors with at most k exceptions.
    Near {
        #[arg(long)]
        x_max: u64,
        /// Exception budget k.
        #[arg(long)]
        k: u32,
        /// Largest exception-set cardinality tracked exactly.
        #[arg(long, default_value_t = SearchBudget::default().k_cap)]
        k_cap: u32,
        /// Node allowance per witness reconstruction search.
        #[arg(long, default_value_t = SearchBudget::default().node_limit)]
        node_limit: u64,
    },
    /// Profile every n ≤ x with an exception set of size exactly k.
    Exact {
        #[arg(long)]
        x_max: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = SearchBudget::default().k_cap)]
        k_cap: u32,
        #[arg(long, default_value_t = SearchBudget::default().node_limit)]
        node_limit: u64,
    },
    /// Profile every n ≤ x with exception sets of two exact sizes at once.
    Intersect {
        #[arg(long)]
        x_max: u64,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        #[arg(long, default_value_t = SearchBudget::default().k_cap)]
        k_cap: u32,
        #[arg(long, default_value_t = SearchBudget::default().node_limit)]
        node_limit: u64,
    },
    /// Among n ≤ x with an exact k-exception set, count those with σ(n) − 2n ≥ n^ε.
    EEps {
        #[arg(long)]
        x_max: u64,
        #[arg(long)]
        k: u32,
        /// Abundance exponent ε as P/Q with 0 < P/Q < 1/3.
        #[arg(long, value_name = "P/Q")]
        eps: String,
    },
    /// Empirical distribution of σ(n)/n at the given sample points.
    Distribution {
        #[arg(long)]
        x_max: u64,
        /// Sample point u as A/B or an integer; repeat for several points.
        #[arg(long = "u", value_name = "A/B", required = true)]
        u: Vec<String>,
    },
    /// JSON report of every exact constant the censuses determine.
    Constants {
        /// Sieve limit for the perfect-number reciprocal sums.
        #[arg(long, default_value_t = 100_000_000)]
        perfect_limit: u64,
        /// Search bound for the structured divisor-count censuses.
        #[arg(long, default_value_t = 1_000_000)]
        structured_bound: u64,
        /// Exception budget for the greedy admissible scan.
        #[arg(long, default_value_t = 1)]
        greedy_k: u32,
        /// Scan cutoff for the greedy admissible scan.
        #[arg(long, default_value_t = 234)]
        greedy_x: u64,
    },
    /// Greedy admissible subset of the k-exception census and its density bound.
    Admissible {
        #[arg(long, default_value_t = 234)]
        x_max: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Normalized within-perfect counts for eight power thresholds at three cutoffs.
    Table1 {
        #[arg(long, default_value_t = 20_000_000)]
        x_max: u64,
    },
    /// Exact-exception census sizes and intersection ratios at five cutoffs.
    Table2 {
        #[arg(long, default_value_t = 1_000_000)]
        x_max: u64,
    },
    /// Verify the divisor-splitting counting rule for n = p·m; rows are violations.
    LemmaCheck {
        #[arg(long)]
        x_max: u64,
        #[arg(long)]
        k: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::RangeTooLarge(_) => 2,
                Error::Undecided { .. } => 3,
                _ => 1,
            })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let format = cli.output_format;
    let allow_large = cli.allow_large;
    match cli.command {
        Command::Sieve { lo, x_max } => {
            guard_scan(x_max, allow_large)?;
            let bound = if allow_large {
                MAX_SIEVE_BOUND
            } else {
                DEFAULT_SIEVE_BOUND
            };
            let segment = match cli.cache_dir {
                Some(dir) => sieve_range_cached(lo, x_max, &dir, bound)?,
                None => sieve_range_with_bound(lo, x_max, bound)?,
            };
            emit(&sieve_table(&segment), format);
            Ok(0)
        }
        Command::Within {
            x_max,
            ell,
            threshold,
            series,
        } => {
            guard_scan(x_max, allow_large)?;
            let ell = Ell::from_str(&ell)?;
            let threshold = ThresholdSpec::from_str(&threshold)?;
            let table = match series {
                Some(step) => within_series(x_max, step, ell, threshold)?,
                None => within_table(&[count_within(x_max, ell, threshold)?]),
            };
            emit(&table, format);
            Ok(0)
        }
        Command::Almost { x_max, ell, k } => {
            guard_scan(x_max, allow_large)?;
            let ell = integer_ell(&ell)?;
            let count = count_almost(x_max, ell, k)?;
            let mut table = Table::new(&["x_max", "ell", "k", "count"]);
            table.push_row(vec![
                x_max.to_string(),
                ell.to_string(),
                k.to_string(),
                count.to_string(),
            ]);
            emit(&table, format);
            Ok(0)
        }
        Command::Spikes {
            x_max,
            ell,
            k_min,
            k_max,
        } => {
            guard_scan(x_max, allow_large)?;
            let ell = integer_ell(&ell)?;
            let rows = spike_scan(x_max, ell, k_min, k_max)?;
            emit(&spikes_table(&rows), format);
            Ok(0)
        }
        Command::Near {
            x_max,
            k,
            k_cap,
            node_limit,
        } => {
            guard_scan(x_max, allow_large)?;
            let members = census_near(x_max, k)?;
            profiles_report(&members, k_cap, node_limit, format)
        }
        Command::Exact {
            x_max,
            k,
            k_cap,
            node_limit,
        } => {
            guard_scan(x_max, allow_large)?;
            let members = census_exact(x_max, k)?;
            profiles_report(&members, k_cap, node_limit, format)
        }
        Command::Intersect {
            x_max,
            k1,
            k2,
            k_cap,
            node_limit,
        } => {
            guard_scan(x_max, allow_large)?;
            let members = census_exact_intersection(x_max, k1, k2)?;
            profiles_report(&members, k_cap, node_limit, format)
        }
        Command::EEps { x_max, k, eps } => {
            guard_scan(x_max, allow_large)?;
            let (eps_num, eps_den) = parse_ratio(&eps)?;
            let (strong, members) = ratio_e_eps(x_max, k, eps_num, eps_den)?;
            let mut table = Table::new(&[
                "x_max",
                "k",
                "eps_num",
                "eps_den",
                "strongly_abundant",
                "members",
                "fraction",
            ]);
            let fraction = if members == 0 {
                String::new()
            } else {
                format_fixed(strong as f64 / members as f64, 6)
            };
            table.push_row(vec![
                x_max.to_string(),
                k.to_string(),
                eps_num.to_string(),
                eps_den.to_string(),
                strong.to_string(),
                members.to_string(),
                fraction,
            ]);
            emit(&table, format);
            Ok(0)
        }
        Command::Distribution { x_max, u } => {
            guard_scan(x_max, allow_large)?;
            let us = u
                .iter()
                .map(|s| parse_ratio(s))
                .collect::<Result<Vec<_>>>()?;
            let values = empirical_distribution(x_max, &us)?;
            emit(&distribution_table(&us, &values), format);
            Ok(0)
        }
        Command::Constants {
            perfect_limit,
            structured_bound,
            greedy_k,
            greedy_x,
        } => {
            guard_scan(perfect_limit, allow_large)?;
            guard_scan(structured_bound, allow_large)?;
            guard_scan(greedy_x, allow_large)?;
            let cfg = ConstantsConfig {
                perfect_limit,
                structured_bound,
                greedy_k,
                greedy_x,
            };
            print!("{}", constants_json(&cfg)?);
            Ok(0)
        }
        Command::Admissible { x_max, k } => {
            guard_scan(x_max, allow_large)?;
            let members = greedy_admissible(k, x_max)?;
            let bound = m_lower_bound(&members)?;
            let mut table = Table::new(&["k", "x_max", "members", "phi_sum", "density_lower_bound"]);
            table.push_row(vec![
                k.to_string(),
                x_max.to_string(),
                join_semicolon(&members),
                bound.phi_sum.to_string(),
                format_fixed(bound.value, 9),
            ]);
            emit(&table, format);
            Ok(0)
        }
        Command::Table1 { x_max } => {
            guard_scan(x_max, allow_large)?;
            let output = table1(x_max)?;
            for warning in &output.warnings {
                eprintln!("warning: {warning}");
            }
            emit(&output.table, format);
            Ok(0)
        }
        Command::Table2 { x_max } => {
            guard_scan(x_max, allow_large)?;
            emit(&table2(x_max)?.table, format);
            Ok(0)
        }
        Command::LemmaCheck { x_max, k } => {
            guard_scan(x_max, allow_large)?;
            let violations = verify_counting_lemma(x_max, k)?;
            let mut table = Table::new(&["n"]);
            for n in violations {
                table.push_row(vec![n.to_string()]);
            }
            emit(&table, format);
            Ok(0)
        }
    }
}

/// Render member profiles; exit 3 when any witness search was cut short.
fn profiles_report(members: &[u64], k_cap: u32, node_limit: u64, format: Format) -> Result<u8> {
    let budget = SearchBudget { k_cap, node_limit };
    let profiles = members
        .iter()
        .map(|&n| profile_with_budget(n, budget))
        .collect::<Result<Vec<NearPerfectProfile>>>()?;
    emit(&near_table(&profiles), format);
    let undecided: Vec<u64> = profiles
        .iter()
        .filter(|p| !p.undecided.is_empty())
        .map(|p| p.n)
        .collect();
    if undecided.is_empty() {
        Ok(0)
    } else {
        eprintln!(
            "warning: witness searches exhausted {node_limit} nodes at n = {}",
            join_semicolon(&undecided)
        );
        Ok(3)
    }
}

fn guard_scan(x: u64, allow_large: bool) -> Result<()> {
    if x > LARGE_SCAN_GUARD && !allow_large {
        return Err(Error::RangeTooLarge(format!(
            "bound {x} exceeds the default guard {LARGE_SCAN_GUARD}; pass --allow-large to proceed"
        )));
    }
    Ok(())
}

fn emit(table: &Table, format: Format) {
    match format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Json => print!("{}", table.to_json()),
    }
}

/// Accept "a" or "a/1" for operations whose multiplier must be an integer.
fn integer_ell(s: &str) -> Result<u64> {
    let ell = Ell::from_str(s)?;
    if ell.denom() != 1 {
        return Err(Error::InvalidArgument(format!(
            "this census needs an integer multiplier, got {ell}"
        )));
    }
    Ok(ell.numer())
}

/// Parse "a/b" (or a bare integer as a/1) into a numerator/denominator pair.
fn parse_ratio(s: &str) -> Result<(u64, u64)> {
    let parse_part = |part: &str| {
        part.trim().parse::<u64>().map_err(|_| {
            Error::InvalidArgument(format!("expected a nonnegative rational a/b, got {s:?}"))
        })
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let (num, den) = (parse_part(num)?, parse_part(den)?);
            if den == 0 {
                return Err(Error::InvalidArgument(format!(
                    "zero denominator in {s:?}"
                )));
            }
            Ok((num, den))
        }
        None => Ok((parse_part(s)?, 1)),
    }
}

fn join_semicolon(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}
