use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use belyi_cli::report::NewtonReport;
use belyi_cli::{svg, table};
use belyi_core::{
    belyi_for_rational, certify, height, minus_one_relation, newton_polygon, run_suite,
    valuation_profile, CorpusSpec, ExecMode, Poly, Prime, Rational, Suite,
};
use chrono::Utc;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "belyi",
    version,
    about = "Certify Belyi polynomials, compute Newton polygons, and bound Belyi \
             heights, all in exact rational arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the polynomial read from stdin as {"coeffs": ["0", "4", "-4"]}
    Check,
    /// Newton polygon and valuation profile of the stdin polynomial
    Newton {
        /// Prime the valuations are taken at
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        /// Also report the polygon of B - 1 and the junction comparison
        #[arg(long)]
        minus_one: bool,
        /// Write the polygon's vertex and segment data as an SVG file
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Construct a certified Belyi polynomial sending lambda into {0, 1}
    Construct {
        /// Target rational, e.g. 4, 2/5, -7/3
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
    },
    /// Certified bounds on the least Belyi degree reaching lambda; appends
    /// a record to the height table
    Height {
        /// Target rational, e.g. 4, 2/5, -7/3
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        lambda: Rational,
        /// Height table file (default: $BELYI_TABLE, then belyi_heights.jsonl)
        #[arg(long, value_name = "FILE")]
        table: Option<PathBuf>,
    },
    /// Run a verification suite over the deterministic corpora
    Verify {
        /// polygon-laws | belyi-laws | theorems | oracles | all
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        corpus: CorpusFlags,
    },
}

/// Overrides for the default corpus; anything left unset keeps its
/// default.
#[derive(Args)]
struct CorpusFlags {
    /// Largest denominator b for the B_{a,b} generators
    #[arg(long)]
    max_b: Option<u64>,
    /// Composition chain length over the generators
    #[arg(long)]
    max_chain: Option<usize>,
    /// Largest index of the Chebyshev generators
    #[arg(long)]
    chebyshev_max_n: Option<u32>,
    /// Seed for the sampled polynomials
    #[arg(long)]
    seed: Option<u64>,
    /// Primes used by polygon checks stay at or below this bound
    #[arg(long)]
    prime_ceiling: Option<u64>,
    /// Number of sampled split polynomials
    #[arg(long)]
    split_count: Option<usize>,
    /// Degree bound for sampled split polynomials
    #[arg(long)]
    split_max_degree: Option<usize>,
}

impl CorpusFlags {
    fn apply(self, spec: &mut CorpusSpec) {
        if let Some(v) = self.max_b {
            spec.max_b = v;
        }
        if let Some(v) = self.max_chain {
            spec.max_chain = v;
        }
        if let Some(v) = self.chebyshev_max_n {
            spec.chebyshev_max_n = v;
        }
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if let Some(v) = self.prime_ceiling {
            spec.prime_ceiling = v;
        }
        if let Some(v) = self.split_count {
            spec.split_count = v;
        }
        if let Some(v) = self.split_max_degree {
            spec.split_max_degree = v;
        }
    }
}

/// The two failure channels: usage problems go to stderr with exit 2,
/// domain failures become {"error": ...} on stdout with exit 1.
enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn main() -> ExitCode {
    // Die quietly when the reader closes the pipe (belyi ... | head)
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Domain(message)) => {
            println!("{}", serde_json::json!({ "error": message }));
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Check => cmd_check(),
        Command::Newton {
            prime,
            minus_one,
            svg,
        } => cmd_newton(prime, minus_one, svg),
        Command::Construct { lambda } => cmd_construct(&lambda),
        Command::Height { lambda, table } => cmd_height(&lambda, table),
        Command::Verify { suite, corpus } => cmd_verify(suite, corpus),
    }
}

fn cmd_check() -> Result<ExitCode, Failure> {
    let poly = poly_from_stdin()?;
    let cert = certify(&poly).map_err(domain)?;
    emit(&cert);
    Ok(ExitCode::SUCCESS)
}

fn cmd_newton(
    prime: Prime,
    minus_one: bool,
    svg_path: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let poly = poly_from_stdin()?;
    let report = NewtonReport {
        prime: prime.get(),
        polygon: newton_polygon(&poly, prime).map_err(domain)?,
        profile: valuation_profile(&poly, prime).map_err(domain)?,
        minus_one: if minus_one {
            Some(minus_one_relation(&poly, prime).map_err(domain)?)
        } else {
            None
        },
    };
    if let Some(path) = svg_path {
        std::fs::write(&path, svg::render(&report.polygon))
            .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(lambda: &Rational) -> Result<ExitCode, Failure> {
    emit(&belyi_for_rational(lambda));
    Ok(ExitCode::SUCCESS)
}

fn cmd_height(lambda: &Rational, table_flag: Option<PathBuf>) -> Result<ExitCode, Failure> {
    let bounds = height(lambda).map_err(domain)?;
    let record = table::HeightRecord::from_bounds(&bounds, Utc::now());
    let path = table::resolve_path(table_flag, std::env::var_os(table::TABLE_ENV));
    table::append(&path, &record).map_err(domain)?;
    emit(&bounds);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: Suite, flags: CorpusFlags) -> Result<ExitCode, Failure> {
    let mut spec = CorpusSpec::default();
    flags.apply(&mut spec);
    let report = run_suite(suite, &spec, ExecMode::default());
    emit(&report);
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn poly_from_stdin() -> Result<Poly, Failure> {
    let mut buffer = String::new();
    std::io::stdin()
        .read_to_string(&mut buffer)
        .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
    serde_json::from_str(&buffer).map_err(|e| Failure::Usage(format!("polynomial JSON: {e}")))
}

fn emit<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let n: u64 = s.parse().map_err(|e| format!("{e}"))?;
    Prime::new(n).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, belyi_core::exactnum::ParseRationalError> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, belyi_core::verify::UnknownSuite> {
    s.parse()
}
