//! Two-team token games on small networks.
//!
//! [`graphgen`] builds the arenas, [`engine`] plays one replica,
//! [`montecarlo`] runs seeded batches and sweeps, and [`simnet`] turns the
//! batch statistics into coincidence similarity networks. [`io`] holds the
//! file formats shared by the command-line tool.

pub mod engine;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod graphgen;
pub mod io;
pub mod montecarlo;
pub mod simnet;

pub use engine::{run_game, GameConfig, GameKind, GameOutcome, GameResult, GameState, Team};
pub use error::{Error, Result};
pub use geometry::Point2D;
pub use graph::Graph;
pub use graphgen::{Topology, TopologyKind};
pub use montecarlo::{run_batch, sweep, BatchStats, CaseResult, Histogram, SweepOptions};
pub use simnet::{FeatureMatrix, SimilarityNetwork};
