mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use monomialis::table::CFilter;
use monomialis::{BhhParams, Error};

use cache::{Cache, StaleEntry};
use commands::*;

/// Associated primes and depth of powers of BHH(m, r, s) monomial ideals.
#[derive(Parser, Debug)]
#[command(name = "monomialis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Directory for cached results.
    #[arg(
        long,
        global = true,
        env = "MONOMIALIS_CACHE",
        default_value = ".monomialis-cache"
    )]
    cache_dir: PathBuf,

    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Recompute every cache hit and fail if it differs.
    #[arg(long, global = true)]
    verify_cache: bool,

    /// Time budget per cell or instance, in seconds.
    #[arg(long, global = true, default_value_t = 600.0)]
    budget_seconds: f64,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct Family {
    #[arg(short = 'm')]
    m: usize,
    #[arg(short = 'r')]
    r: usize,
    #[arg(short = 's', default_value_t = 1)]
    s: usize,
}

impl Family {
    fn params(self) -> monomialis::Result<BhhParams> {
        BhhParams::new(self.m, self.r, self.s)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List Ass(B^n) and compare its size with the closed form.
    Ass {
        #[command(flatten)]
        family: Family,
        #[arg(short = 'n')]
        n: usize,
        /// Only primes containing the c variables.
        #[arg(long, group = "filter")]
        containing_c: bool,
        /// Only primes avoiding the c variables.
        #[arg(long, group = "filter")]
        c_free: bool,
        /// All associated primes (default).
        #[arg(long, group = "filter")]
        total: bool,
    },
    /// Grid of c-containing counts, rows m and columns n.
    Table {
        #[arg(short = 'r')]
        r: usize,
        #[arg(short = 's', default_value_t = 1)]
        s: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "formula")]
        source: TableSource,
    },
    /// Depth of R/B^n for n = 1..n-max.
    Depth {
        #[command(flatten)]
        family: Family,
        /// Split c1 into this many variables.
        #[arg(long = "e", default_value_t = 1)]
        e: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "formula")]
        strategy: StrategyArg,
    },
    /// Check the binomial identity for the r = 2 totals.
    Identity {
        #[arg(long)]
        m_max: usize,
    },
    /// Build a witness monomial and verify B^n : w = P.
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessKind,
        #[command(flatten)]
        family: Family,
        /// Columns of each row in P, rows separated by `;`, e.g. "1;1,2".
        #[arg(long)]
        rows: String,
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
    },
    /// Local maxima of n ↦ |Ass(B^n)| for r = 2.
    Maxima {
        #[arg(short = 'm')]
        m: usize,
    },
}

const EXIT_MISMATCH: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<StaleEntry>().is_some() {
        return EXIT_MISMATCH;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Capacity { .. } | Error::BudgetExceeded) => EXIT_RESOURCE,
        Some(
            Error::Precondition(_)
            | Error::InvalidParams(_)
            | Error::UnknownVariable(_)
            | Error::Parse(_)
            | Error::ZeroIdeal
            | Error::UnitIdeal,
        ) => EXIT_PRECONDITION,
        _ => 1,
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let ctx = Ctx {
        cache: if cli.no_cache {
            Cache::disabled()
        } else {
            Cache::new(Some(cli.cache_dir.clone()), cli.verify_cache)
        },
        budget: Duration::from_secs_f64(cli.budget_seconds.max(0.0)),
        format: cli.format,
    };
    match &cli.command {
        Command::Ass {
            family,
            n,
            containing_c,
            c_free,
            ..
        } => {
            let filter = if *containing_c {
                CFilter::ContainingC
            } else if *c_free {
                CFilter::CFree
            } else {
                CFilter::Total
            };
            cmd_ass(&ctx, &family.params()?, *n, filter)
        }
        Command::Table {
            r,
            s,
            m_max,
            n_max,
            source,
        } => cmd_table(&ctx, *r, *s, *m_max, *n_max, *source),
        Command::Depth {
            family,
            e,
            n_max,
            strategy,
        } => cmd_depth(&ctx, &family.params()?, *e, *n_max, *strategy),
        Command::Identity { m_max } => cmd_identity(&ctx, *m_max),
        Command::Witness {
            kind,
            family,
            rows,
            n,
        } => {
            let rows = parse_rows(rows).map_err(|e| Error::Parse(e.to_string()))?;
            cmd_witness(&ctx, *kind, &family.params()?, &rows, *n)
        }
        Command::Maxima { m } => cmd_maxima(&ctx, *m),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_PRECONDITION } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.out);
            if report.mismatch {
                ExitCode::from(EXIT_MISMATCH)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
