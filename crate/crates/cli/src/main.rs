//! Command line front end: load documents, run the lattice, block, Heyting
//! and matrix constructions, and emit tables, JSON or DOT.
//!
//! Exit status: 0 on success, 1 on a domain error (the module's witness is
//! printed verbatim), 2 on a parse error. Output is assembled in memory and
//! written once, so no error path emits a partial structured document.

use clap::{Parser, Subcommand, ValueEnum};

mod output;
mod paper_example;
mod run;

#[derive(Parser)]
#[command(name = "bohr", version, about = "contextual quantum logic toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// enumeration budget for downsets / blocks / sections / members
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget: u64,
    /// structural tolerance for matrix checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_proj: f64,
    /// valuation tolerance (probability-one threshold)
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_val: f64,
    /// strong-limit iterate step cap
    #[arg(long, global = true, default_value_t = 200)]
    pub iter_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// block family: all closed Boolean subalgebras, maximal ones, or the
    /// single-generated presentation
    #[arg(long, global = true, value_enum, default_value_t = Mode::All)]
    pub mode: Mode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    #[value(name = "json-like", alias = "json")]
    JsonLike,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    All,
    Maximal,
    Single,
}

#[derive(Subcommand)]
pub enum Command {
    /// Structural classification of a lattice document (DOT prints Hasse)
    Classify { lattice: String },
    /// Boolean block decomposition and partial-Boolean coherence report
    Blocks { lattice: String },
    /// Count (and decompose) the monotone sections over the block poset
    Bohrify { lattice: String },
    /// Heyting implication D(lhs) ⇒ D(rhs), blockwise
    Implies {
        lattice: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Heyting negation ¬D(elem), blockwise
    Negate {
        lattice: String,
        #[arg(long)]
        elem: String,
    },
    /// Sasaki hook vs Heyting implication comparison table
    Sasaki {
        lattice: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Ideal completion of the lattice
    Idl { lattice: String },
    /// Bruns–Lakser distributive ideals, with the printed-family report
    BrunsLakser { lattice: String },
    /// Frame points of the ideal completion
    Points { lattice: String },
    /// Build a context poset from matrices and generator lists
    MatContext {
        #[arg(long)]
        matrices: String,
        #[arg(long)]
        contexts: String,
        /// close the family under pairwise intersection
        #[arg(long)]
        meet_closure: bool,
        /// do not adjoin the trivial context ℂ·1
        #[arg(long)]
        no_trivial: bool,
    },
    /// Spectral open D(a) of a named hermitian element in a context
    MatSpectrum {
        #[arg(long)]
        matrices: String,
        #[arg(long)]
        contexts: String,
        #[arg(long)]
        elem: String,
    },
    /// Daseinise a named projection over the context poset
    Daseinise {
        #[arg(long)]
        matrices: String,
        #[arg(long)]
        contexts: String,
        #[arg(long)]
        target: String,
    },
    /// Kripke valuation of the daseinised projection in a state
    Valuate {
        #[arg(long)]
        matrices: String,
        #[arg(long)]
        contexts: String,
        #[arg(long)]
        state: String,
        #[arg(long)]
        target: String,
    },
    /// State–member pairing on the external spectrum (basis member of the
    /// daseinised projection), compared with the Kripke valuation
    Pairing {
        #[arg(long)]
        matrices: String,
        #[arg(long)]
        contexts: String,
        #[arg(long)]
        state: String,
        #[arg(long)]
        target: String,
    },
    /// Run the built-in ten-element worked example end to end
    PaperExample,
}

fn main() {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(out) => {
            print!("{out}");
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
