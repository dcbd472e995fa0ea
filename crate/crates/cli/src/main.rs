//! `patterna`: classify, generate, decide and verify patterns of consistency
//! and inconsistency from the command line.
//!
//! Every command writes one JSON document (or DIMACS text) to standard output
//! and a short human-readable summary to standard error. Exit codes: 0 for a
//! positive answer, 1 for a negative answer, 2 for usage or input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "patterna", version, about = "Patterns of consistency and inconsistency")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the classification flags of a pattern.
    Classify {
        file: PathBuf,
        /// Merge duplicate conditions instead of rejecting them.
        #[arg(long)]
        lenient: bool,
    },
    /// Generate a named pattern family.
    Generate {
        /// op, ip, sop, ktp, tp1, ktp2, cm, cooper or pmchar.
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        /// Branching (tree families) or columns (array family).
        #[arg(long)]
        b: Option<usize>,
        /// Depth (tree families) or rows (array family).
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Decide whether a pattern is exhibitable.
    Decide {
        file: PathBuf,
        /// Include the synthesized witness family.
        #[arg(long)]
        witness: bool,
        /// Also run the brute-force oracle and report agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the CNF instance of one consistency condition in DIMACS format.
    Dimacs {
        file: PathBuf,
        /// Index of the consistency condition in canonical order.
        #[arg(long, conflicts_with = "sentinel", required_unless_present = "sentinel")]
        condition: Option<usize>,
        /// The instance asking for any admissible complete type.
        #[arg(long)]
        sentinel: bool,
    },
    /// Turn a DIMACS CNF file into the pattern that is exhibitable iff it is satisfiable.
    FromCnf { file: PathBuf },
    /// Hypergraph operations.
    Hypergraph {
        #[arg(value_enum)]
        op: HypergraphOp,
        file: PathBuf,
    },
    /// Run a construction over a batch of instances and report every check.
    Verify {
        /// powerset-sm, atomless-pm, pm-char, cm-doubling, ip-family, one1,
        /// membership, blowup-roundtrip, triangle-free, free-amalgam or cooper-claim.
        construction: String,
        #[arg(long)]
        n: Option<usize>,
        /// Enumerate all instances instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Free amalgam of two witness structures over a common substructure.
    Amalgam {
        a: PathBuf,
        b0: PathBuf,
        b1: PathBuf,
        /// JSON object {"e0": embedding, "e1": embedding}.
        maps: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HypergraphOp {
    /// The clique / non-edge pattern.
    Pattern,
    /// The blowup to arity k+1.
    Blowup,
    /// The triangle-free doubling of a graph.
    Double,
    /// The two-sorted witness structure (input: hypergraph or pattern).
    WitnessStructure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(outcome) => {
            println!("{}", outcome.payload);
            if let Some(note) = outcome.note {
                eprintln!("{note}");
            }
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(err) => {
            eprintln!("patterna: error: {}", format!("{err:#}").replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
