use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netgames::engine::{GameKind, DEFAULT_MAX_ITERATIONS};
use netgames::graphgen::TopologyKind;
use netgames::simnet::{FeatureMode, Normalization};

pub const WORKERS_ENV: &str = "NETGAMES_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "netgames", version, about = "Two-team token games on networks")]
pub struct Cli {
    /// JSON object or key=value file whose keys mirror the subcommand's long
    /// flags; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an arena and write it as graph JSON.
    GenNetwork(GenNetworkArgs),
    /// Play a batch of replicas of one game on a graph file.
    Simulate(SimulateArgs),
    /// Play every (game, topology) combination.
    Sweep(SweepArgs),
    /// Build a coincidence similarity network from sweep results.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    Reg,
    Er,
    Ba,
    Geo,
}

impl From<TopologyArg> for TopologyKind {
    fn from(t: TopologyArg) -> Self {
        match t {
            TopologyArg::Reg => TopologyKind::Reg,
            TopologyArg::Er => TopologyKind::Er,
            TopologyArg::Ba => TopologyKind::Ba,
            TopologyArg::Geo => TopologyKind::Geo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameArg {
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl From<GameArg> for GameKind {
    fn from(g: GameArg) -> Self {
        match g {
            GameArg::G1 => GameKind::G1,
            GameArg::G2 => GameKind::G2,
            GameArg::G3 => GameKind::G3,
            GameArg::G4 => GameKind::G4,
            GameArg::G5 => GameKind::G5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeaturesArg {
    Victories,
    Durations,
    Moments,
    Combined,
}

impl From<FeaturesArg> for FeatureMode {
    fn from(f: FeaturesArg) -> Self {
        match f {
            FeaturesArg::Victories => FeatureMode::Victories,
            FeaturesArg::Durations => FeatureMode::DurationsHist,
            FeaturesArg::Moments => FeatureMode::DurationsMoments,
            FeaturesArg::Combined => FeatureMode::Combined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Raw,
    Standardized,
    Recentered,
    Shifted,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Raw => Normalization::Raw,
            NormalizationArg::Standardized => Normalization::Standardized,
            NormalizationArg::Recentered => Normalization::StandardizedRecentered,
            NormalizationArg::Shifted => Normalization::Shifted,
        }
    }
}

/// Generator parameters; each topology reads the ones it needs.
#[derive(Debug, Clone, Args)]
pub struct TopologyParams {
    /// Lattice side for reg and geo.
    #[arg(long, default_value_t = 5)]
    pub side: usize,
    /// Node count for er and ba.
    #[arg(long, default_value_t = 25)]
    pub n: usize,
    /// Target mean degree for er.
    #[arg(long, default_value_t = 5.0)]
    pub avg_degree: f64,
    /// Links added per new node for ba.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Seed ring size for ba.
    #[arg(long, default_value_t = 3)]
    pub m0: usize,
    /// Jitter half-width for geo, in lattice units.
    #[arg(long, default_value_t = 0.25)]
    pub perturbation: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GenNetworkArgs {
    #[arg(long = "type", value_enum)]
    pub kind: TopologyArg,
    #[command(flatten)]
    pub params: TopologyParams,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Graph JSON to write; the manifest goes next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RunParams {
    #[arg(long, default_value_t = 10_000)]
    pub runs: u64,
    /// Players per team.
    #[arg(long, default_value_t = 10)]
    pub players: u32,
    /// Iteration cap; runs reaching it are censored.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iters: u64,
    /// Base seed; replica seeds are derived from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = WORKERS_ENV, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub game: GameArg,
    #[command(flatten)]
    pub run: RunParams,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Write a JSON-lines trace of one replica.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
    /// Replica traced by --trace.
    #[arg(long, default_value_t = 0)]
    pub trace_replica: u64,
    /// Also write an SVG duration histogram.
    #[arg(long)]
    pub svg: bool,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "g1,g2,g3,g4,g5")]
    pub games: Vec<GameArg>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "reg,er,ba,geo")]
    pub topologies: Vec<TopologyArg>,
    #[command(flatten)]
    pub params: TopologyParams,
    #[command(flatten)]
    pub run: RunParams,
    /// Give every replica its own arena instead of one per topology.
    #[arg(long)]
    pub resample_per_run: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write an SVG duration histogram per case.
    #[arg(long)]
    pub svg: bool,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Directory written by `sweep`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub features: FeaturesArg,
    /// Strictness exponent of the coincidence index.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// Constant added to the Jaccard numerator and denominator.
    #[arg(long, default_value_t = 0.0)]
    pub regularization: f64,
    /// Weights below this are pruned to zero.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    /// Restrict to these games.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub games: Vec<GameArg>,
    /// Restrict to these topologies.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub topologies: Vec<TopologyArg>,
    #[arg(long, value_enum, default_value = "standardized")]
    pub normalization: NormalizationArg,
    /// Offset for --normalization shifted.
    #[arg(long, default_value_t = 1.0)]
    pub shift: f64,
    /// Histogram bins for --features durations.
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long)]
    pub out: PathBuf,
}
