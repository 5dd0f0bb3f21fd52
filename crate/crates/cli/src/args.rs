use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "qdbis",
    version,
    about = "Independent sets and containers in the Hamming cube"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    /// Directory for binary profile caches.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Overrides the `d^4` small/large component threshold.
    #[arg(long, global = true)]
    pub small_threshold: Option<u64>,

    /// Seed for heuristic scans.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[arg(long, default_value_t = qdbis_core::containers::DEFAULT_GAMMA, global = true)]
    pub gamma: f64,

    #[arg(long, default_value_t = qdbis_core::bounds::DEFAULT_ALPHA, global = true)]
    pub alpha: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountWhat {
    Bis,
    Is,
    BySize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Heuristic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phi {
    Trivial,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Entropy,
    Compositions,
    Linked,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact counts of balanced or ordinary independent sets.
    Count {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = CountWhat::Bis)]
        what: CountWhat,
    },
    /// The `(|A|, |N(A)|)` profile of every even subset.
    Profile {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Split each entry by whether `|[A]| <= N/4`.
        #[arg(long)]
        closure_indicator: bool,
    },
    /// Maximum balanced independent set size, closed form against search.
    Maxbis {
        #[arg(long)]
        d: u32,
    },
    /// Balanced subsets of one maximum balanced independent set.
    Lowerbound {
        #[arg(long)]
        d: u32,
    },
    /// Plot-ready scaling table.
    Scaling {
        #[arg(long)]
        d_min: u32,
        #[arg(long)]
        d_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum isoperimetric deficit of small even sets.
    Isoperimetry {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
    },
    /// Largest `|A| d / |N(A)|` over small even sets.
    Smallsets {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        max_size: usize,
    },
    /// Size of one family `G(a, g)`, or its members with `--list`.
    Containers {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        list: bool,
    },
    /// Certificate roundtrip and cost report over every family, or one.
    Certify {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Phi::Trivial)]
        phi: Phi,
        #[arg(long, requires = "g")]
        a: Option<u32>,
        #[arg(long, requires = "a")]
        g: Option<u32>,
    },
    /// Cost audit of one even vertex set.
    Audit {
        #[arg(long)]
        d: u32,
        /// Bitmap of vertex ids, most significant digit first.
        #[arg(long)]
        set: String,
    },
    /// Numerical checks of the supporting bounds.
    Bounds {
        #[arg(long, value_enum)]
        check: Check,
        /// Tail length; the whole `1..=30` grid when omitted.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// Maximum number of parts.
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        x: Option<u32>,
        #[arg(long, default_value_t = 0)]
        v: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
}
