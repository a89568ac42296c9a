mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use krsys_core::fermionic::NuSpec;
use krsys_core::{Error, Series};

#[derive(Parser, Debug)]
#[command(name = "krsys", version, about = "Exact q-characters of Kirillov-Reshetikhin modules and their identities")]
pub struct Cli {
    /// Directory of the on-disk q-character cache.
    #[arg(long, global = true, env = "KRSYS_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Depth cap of the saturation algorithm.
    #[arg(long, global = true, env = "KRSYS_MAX_DEPTH", default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    max_depth: u64,

    /// Monomial cap of the saturation algorithm.
    #[arg(long, global = true, env = "KRSYS_MAX_MONOMIALS", default_value_t = 5_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_monomials: u64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Keep computed characters in memory only.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Worker threads for independent checks.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    /// Include elapsed time in reports.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Cartan series letter (A-G).
    #[arg(value_name = "TYPE")]
    series: Series,
    rank: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the q-character of a KR module.
    Qchar {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        node: usize,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        s: i64,
        /// Print every term in canonical order.
        #[arg(long)]
        full: bool,
    },
    /// Verify an identity; exit status 1 on mismatch.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Administer the on-disk cache.
    Cache {
        #[command(subcommand)]
        what: CacheCmd,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Grid {
    /// Single node; all nodes when omitted.
    #[arg(long)]
    node: Option<usize>,
    /// Single length; 1..=3 when omitted.
    #[arg(long)]
    k: Option<i64>,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// T-system identity of q-characters.
    Tsystem {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        s: i64,
    },
    /// Q-system identity of ordinary characters.
    Qsystem {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        grid: Grid,
    },
    /// The module S of the T-system has a single dominant monomial.
    Special {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        s: i64,
    },
    /// Fermionic formula against normalized KR characters.
    Fermionic {
        #[command(flatten)]
        target: Target,
        /// Entries `i:k:mult`, comma separated or repeated.
        #[arg(long, default_value = "")]
        nu: Vec<NuSpec>,
        /// Truncation degree.
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
    /// Stabilization of normalized KR characters up to a depth.
    Limit {
        #[command(flatten)]
        target: Target,
        /// Single node; all nodes when omitted.
        #[arg(long)]
        node: Option<usize>,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Lengths to compare, `3,4,5` or `3..5`.
        #[arg(long, default_value = "3..5", value_parser = config::parse_k_range)]
        k_range: config::KRange,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheCmd {
    /// File names of the cache entries.
    List,
    /// Remove every entry.
    Clear,
    /// Per-entry type, node, length, monomial count and SHA-256.
    Info,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DepthCapExceeded(_) | Error::MonomialCapExceeded(_) | Error::Overflow => 3,
        Error::NotSpecial(_)
        | Error::Inconsistent { .. }
        | Error::NegativeResidual { .. }
        | Error::NonZeroRemainder { .. }
        | Error::NonIntegralP { .. } => 4,
        Error::Cache { .. } | Error::Io { .. } => 5,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::Config::from_cli(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Some(jobs) = cli.jobs {
        // Only fails if a global pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global();
    }
    let result = match cli.command {
        Command::Qchar { target, node, k, s, full } => commands::qchar(&cfg, &target, node, k, s, full),
        Command::Verify { what } => commands::verify(&cfg, what),
        Command::Cache { what } => commands::cache(&cfg, what),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
