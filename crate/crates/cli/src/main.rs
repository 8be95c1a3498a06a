use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

mod commands;
mod inputs;
mod render;

/// Exact twisted representation rings and orbifold K-theory ranks.
#[derive(Debug, Parser)]
#[command(name = "orbk", version)]
struct Cli {
    /// Print a readable text report instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Upper bound on worker threads.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GroupArg {
    /// Group file, or a builtin name such as C5, S4, D6, A4, V4, Q8.
    group: String,
}

#[derive(Debug, Args)]
struct TwistArg {
    /// Cocycle file, or an index into the H² classes at `--modulus`.
    #[arg(long)]
    cocycle: Option<String>,
    /// Coefficient modulus for an indexed cocycle; the group exponent by default.
    #[arg(long)]
    modulus: Option<u64>,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    #[command(flatten)]
    group: GroupArg,
    /// Complex file with the action.
    complex: PathBuf,
    #[command(flatten)]
    twist: TwistArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order, conjugacy classes and cyclic subgroups.
    Group(GroupArg),
    /// Classes of H²(G, S¹) representable at modulus m.
    H2 {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Conjugacy classes that are regular for a cocycle.
    Regular {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        twist: TwistArg,
    },
    /// Ordinary or twisted character table.
    Chartable {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        twist: TwistArg,
    },
    /// Graded twisted representation ring with structure constants.
    Trring {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Rational ranks of twisted orbifold K-theory.
    Korb(SpaceArgs),
    /// Bredon cohomology with representation-ring coefficients.
    Bredon {
        #[command(flatten)]
        space: SpaceArgs,
        /// Use constant rational coefficients instead.
        #[arg(long, conflicts_with = "cocycle")]
        constant: bool,
    },
    /// Orbifold Euler characteristic from the cell formula.
    Chiorb(SpaceArgs),
    /// Totals of a sector file.
    Sectors { file: PathBuf },
    /// Sectors X^⟨g⟩/Z_G(g) of a group action.
    SectorsOf {
        #[command(flatten)]
        group: GroupArg,
        complex: PathBuf,
    },
    /// Euler characteristic of symmetric-product orbifold K-theory.
    Symprod {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long)]
        twisted: bool,
        /// Compare every n up to `--n` with both generating functions.
        #[arg(long)]
        report: bool,
    },
    /// Run the cross-validation suite over the bundled fixtures.
    Verify {
        #[arg(long, default_value = "small")]
        suite: String,
        /// Directory of replacement fixture files (`groups/`, `complexes/`, `sectors/`).
        #[arg(long, value_name = "DIR")]
        fixtures: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let outcome = commands::run(&cli.command, argv);
    let elapsed = start.elapsed();
    match outcome {
        Ok(out) => {
            if cli.text {
                print!("{}", out.text());
            } else {
                println!("{}", out.json());
            }
            eprintln!("wall-time: {:.3} s", elapsed.as_secs_f64());
            ExitCode::from(out.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}
