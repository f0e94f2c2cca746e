use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lexbound",
    version,
    about = "Exact information measures of Boolean functions under a binary symmetric channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// I(b;Y^n), H(b|Y^n) and sum_i I(b;Y_i) for a truth table given with --table
    Mi,
    /// Dump every member of S_n and print the count
    Enumerate,
    /// Run a conjecture driver; exit 0 iff PASS
    Verify {
        #[arg(value_enum)]
        driver: Driver,
    },
    /// Chord certificate for --alpha, or a sweep over --alpha-start..--alpha-end
    Chords,
    /// T_alpha(p) and f(p)H(alpha) on p = k/2^n plus the chord overlay
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Driver {
    Conj1,
    Conj2,
    Sum,
    Harper,
    TripleCe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Compressed,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Input arity (figure: dyadic depth of the sampled grid)
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Single crossover probability
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    #[arg(long, global = true)]
    pub alpha_start: Option<f64>,

    #[arg(long, global = true)]
    pub alpha_end: Option<f64>,

    #[arg(long, global = true)]
    pub alpha_step: Option<f64>,

    /// Maximum chord depth before a certificate is INCONCLUSIVE
    #[arg(long, global = true, default_value_t = lexbound::chordcheck::DEFAULT_DEPTH_CAP)]
    pub depth_cap: u32,

    /// Chord acceptance tolerance (accept when nu >= -epsilon)
    #[arg(long, global = true, default_value_t = lexbound::chordcheck::DEFAULT_EPSILON)]
    pub epsilon: f64,

    /// Comparison tolerance for conjecture drivers
    #[arg(long, global = true, default_value_t = lexbound::verify::DEFAULT_TOLERANCE)]
    pub tolerance: f64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; defaults to available parallelism
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output directory for reports, certificates and CSV files
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Truth table in hex serialization, e.g. n=3:0f
    #[arg(long, global = true)]
    pub table: Option<String>,

    /// Use the O(4^n) posterior oracle instead of the butterfly
    #[arg(long, global = true)]
    pub naive: bool,

    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
}
