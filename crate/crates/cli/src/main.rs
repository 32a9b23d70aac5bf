use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use drinfeld_cli::{cmd_cohomology, cmd_obstruction, cmd_quantize, cmd_verify_dgla, AlgebraArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact verification suites for the graded Lie algebra on tensor powers of
/// an enveloping algebra, its cohomology identification with the exterior
/// algebra, formality obstructions, and twist quantization.
///
/// Exit status: 0 when all checks pass, 1 when a mathematical check fails
/// or a precondition is violated, 2 on usage errors.
#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Include wall-clock timings (reports stop being byte-reproducible).
    #[arg(long, global = true, default_value_t = false)]
    timings: bool,

    /// Refuse linear-algebra blocks larger than this dimension.
    #[arg(long, global = true, default_value_t = 200_000)]
    max_block_dim: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the DGLA axioms exhaustively over basis tuples.
    VerifyDgla {
        /// Algebra: `borel` or `free:N`.
        #[arg(long)]
        algebra: AlgebraArg,
        /// Word-degree cutoff for basis sweeps (and the free-kind quotient).
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        /// Largest tensor arity swept.
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Verify the cohomology identification and print the dimension table.
    Cohomology {
        #[arg(long)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Build the first obstruction cocycle, check closedness, and produce
    /// an exact coboundary witness.
    Obstruction {
        #[arg(long)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        /// Also run the two-dimensional vanishing analysis at this arity
        /// (requires `--algebra borel`).
        #[arg(long)]
        check_2d_vanishing: Option<usize>,
    },
    /// Quantize a triangular r-matrix order by order and verify the
    /// Maurer-Cartan and cocycle equations.
    Quantize {
        #[arg(long)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        /// The r-matrix, e.g. `e1^e2`.
        #[arg(long)]
        r: String,
        /// Truncation order for the twist series.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=6))]
        order: u8,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();

    let result = match &cli.command {
        Command::VerifyDgla {
            algebra,
            cutoff,
            max_arity,
        } => cmd_verify_dgla(algebra, *cutoff, *max_arity),
        Command::Cohomology {
            algebra,
            cutoff,
            max_arity,
        } => cmd_cohomology(algebra, *cutoff, *max_arity, cli.max_block_dim),
        Command::Obstruction {
            algebra,
            cutoff,
            check_2d_vanishing,
        } => {
            if check_2d_vanishing.is_some() && *algebra != AlgebraArg::Borel {
                // an invalid flag combination is a usage error
                eprintln!("error: --check-2d-vanishing requires --algebra borel");
                return ExitCode::from(2);
            }
            cmd_obstruction(algebra, *cutoff, cli.max_block_dim, *check_2d_vanishing)
        }
        Command::Quantize {
            algebra,
            cutoff,
            r,
            order,
        } => cmd_quantize(algebra, *cutoff, cli.max_block_dim, r, *order as usize),
    };

    match result {
        Ok(mut report) => {
            if cli.timings {
                report.elapsed_ms = Some(start.elapsed().as_millis());
            }
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
