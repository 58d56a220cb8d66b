use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cayauto", version, about = "Experiments on automatic presentations of Cayley graphs")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; relative paths resolve against $CAYAUTO_OUT_DIR when set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct Source {
    /// Built-in presentation (see `list`).
    #[arg(long, conflicts_with = "bundle")]
    pub preset: Option<String>,
    /// Directory with domain.atm, edge_<j>.atm and meta.json.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct GroupArg {
    /// Oracle group (see `list`).
    #[arg(long)]
    pub group: String,
    /// Generating set: `default`, `S1` or `S1prime` for the lamplighter.
    #[arg(long)]
    pub gens: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ball,
    Interval,
    Rectangle,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FitMode {
    Recurrence,
    Power,
    Classify,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in presentations and oracle groups.
    List,
    /// Check that a presentation defines a Cayley graph.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Neighbours of one word.
    Translate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: String,
    },
    /// Growth function b_n.
    Growth {
        #[command(flatten)]
        source: Source,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        base_word: Option<String>,
    },
    /// Følner sets.
    Folner {
        #[command(flatten)]
        source: Source,
        /// Rational threshold such as `1/5`.
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = Family::Ball)]
        family: Family,
        /// Largest radius, interval length or rectangle width tried.
        #[arg(long, default_value_t = 20)]
        max: usize,
        /// Step label for intervals; defaults to the first label.
        #[arg(long)]
        label: Option<String>,
        #[arg(long, default_value_t = 12)]
        size_budget: usize,
        #[arg(long, default_value_t = 15)]
        radius: usize,
        /// Subsets examined by the exact search before giving up.
        #[arg(long, default_value_t = cayauto_core::characteristics::DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Average length ℓ_n.
    Avglen {
        #[command(flatten)]
        source: Source,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Stop the exact recursion when a multiset exceeds this many words.
        #[arg(long)]
        max_distinct: Option<usize>,
    },
    /// Expected word length after n random steps.
    Drift {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Radius cap for breadth-first lengths.
        #[arg(long, default_value_t = 8)]
        cap: u64,
    },
    /// Expected number of distinct vertices visited in n random steps.
    Range {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Count positions of the projected walk on the base ℤ.
        #[arg(long)]
        base: bool,
    },
    /// Fit a recurrence, a power law or a growth class to a CSV column.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: FitMode,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 10)]
        holdout: usize,
        /// `upper`, `all` or `a:b`.
        #[arg(long, default_value = "upper")]
        window: String,
    },
    /// Sphere and ball sizes of an oracle group.
    Ball {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        radius: usize,
    },
    /// Compare a presentation with an oracle on a ball.
    IsoCheck {
        #[command(flatten)]
        source: Source,
        /// Defaults to the preset name.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
    /// Write a presentation as a bundle directory.
    Export {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        dir: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::List => "list",
            Command::Validate { .. } => "validate",
            Command::Translate { .. } => "translate",
            Command::Growth { .. } => "growth",
            Command::Folner { .. } => "folner",
            Command::Avglen { .. } => "avglen",
            Command::Drift { .. } => "drift",
            Command::Range { .. } => "range",
            Command::Fit { .. } => "fit",
            Command::Ball { .. } => "ball",
            Command::IsoCheck { .. } => "iso-check",
            Command::Export { .. } => "export",
        }
    }
}
