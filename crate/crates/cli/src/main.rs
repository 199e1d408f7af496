//! `ncprob`: command-line front end for the noncommutative probability engine.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncprob::cumulants::CumulantKind;
use ncprob::partitions::PartitionKind;
use ncprob::shuffle::ChainKind;
use ncprob::Model;

#[derive(Parser, Debug)]
#[command(name = "ncprob", version, about = "Exact combinatorics of noncommutative probability")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,

    /// Largest word length used by the command.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Enumeration or algebra size bound.
    #[arg(long, global = true)]
    pub bound: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate set partitions of one of the standard families.
    Partitions {
        #[arg(long, default_value = "all")]
        kind: PartitionKind,
        #[arg(long)]
        n: usize,
        /// Print only the number of partitions.
        #[arg(long)]
        count: bool,
    },
    /// Moment-cumulant transforms.
    #[command(subcommand)]
    Cumulants(CumulantsCommand),
    /// Check the Magnus relations between free, Boolean and monotone cumulants.
    Magnus {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "monotone")]
        check: String,
    },
    /// Shuffle Markov chains.
    #[command(subcommand)]
    Shuffle(ShuffleCommand),
    /// Convolution powers and central limits on a graded coalgebra.
    Clt {
        #[arg(long, value_enum, default_value_t = CoalgebraKind::Unshuffle)]
        coalgebra: CoalgebraKind,
        #[command(flatten)]
        state: StateSource,
        /// Basis element as a dot-separated word.
        #[arg(long)]
        element: String,
        /// Comma-separated values of n.
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        n: Vec<u64>,
        /// Scaling order s (the state must vanish below degree s).
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Classical and free Wick polynomials.
    #[command(subcommand)]
    Wick(WickCommand),
    /// Bell-pair computations.
    #[command(subcommand)]
    Bell(BellCommand),
}

#[derive(Subcommand, Debug)]
pub enum CumulantsCommand {
    /// Convert a moment functional into cumulants of the given kind.
    Convert {
        #[arg(long)]
        kind: CumulantKind,
        #[command(flatten)]
        source: Source,
        /// Write the cumulant file here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ShuffleCommand {
    /// Exact spectrum of a shuffle chain.
    Spectrum {
        #[arg(long, default_value = "riffle")]
        kind: ChainKind,
        #[arg(long)]
        n: usize,
        /// Also print decimal approximations.
        #[arg(long)]
        decimal: bool,
    },
    /// Distribution of the deck after repeated shuffles.
    Mix {
        #[arg(long, default_value = "riffle")]
        kind: ChainKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: usize,
        /// Starting deck, e.g. `BAC` or `identity`.
        #[arg(long, default_value = "identity")]
        start: String,
        #[arg(long)]
        decimal: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum WickCommand {
    /// `W(x^n)` for a single-generator functional.
    Classical {
        #[command(flatten)]
        state: StateSource,
        #[arg(long)]
        n: usize,
    },
    /// The free Wick polynomial of a word.
    Free {
        #[command(flatten)]
        state: StateSource,
        #[arg(long)]
        word: String,
        /// Use the free-cumulant expansion.
        #[arg(long)]
        via_cumulants: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum BellCommand {
    /// The Bell factor at four angles `θ1,θ'1,θ2,θ'2`.
    Factor {
        #[arg(long)]
        angles: String,
    },
    /// Monte-Carlo run of the quantum card game.
    Game {
        #[arg(long, default_value = "0,2pi/3,pi,pi/3")]
        angles: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// The 16 deterministic local strategies.
    Classical,
    /// Total-probability defect for three successive angles.
    Defect {
        #[arg(long)]
        angles: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoalgebraKind {
    Deconcat,
    Unshuffle,
    Binomial,
}

/// A moment or cumulant file, or a named model.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<Model>,
}

/// A moment file or a named model.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    #[arg(long = "in", alias = "state")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<Model>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
