//! Seeded replica batches and their aggregate statistics.
//!
//! Replica `k` of a batch with base seed `s` plays with seed
//! [`derive_seed`]`(s, k)`. Outcomes are gathered in replica order before
//! aggregation, so a batch is bitwise identical for any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run_game, GameConfig, GameKind, GameOutcome, GameResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphgen::{Topology, TopologyKind};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Salt separating arena seeds from replica seeds derived from the same base.
const ARENA_SALT: u64 = 0x6172_656E_615F_7365;

/// SplitMix64 output for position `stream + 1` of the sequence started at
/// `base`: `mix(base + (stream + 1) * 0x9E3779B97F4A7C15)`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the arena generated for `kind` within a sweep.
pub fn arena_seed(base: u64, kind: TopologyKind) -> u64 {
    derive_seed(base ^ ARENA_SALT, kind as u64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub win_a: u64,
    pub tie: u64,
    pub win_b: u64,
    pub censored: u64,
}

impl OutcomeCounts {
    pub fn record(&mut self, result: GameResult) {
        match result {
            GameResult::WinA => self.win_a += 1,
            GameResult::Tie => self.tie += 1,
            GameResult::WinB => self.win_b += 1,
            GameResult::Censored => self.censored += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.win_a + self.tie + self.win_b + self.censored
    }
}

/// Aggregates over one batch. Duration mean and standard deviation cover
/// terminated runs only and are `None` when every run was censored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub runs: u64,
    pub counts: OutcomeCounts,
    pub pct_win_a: f64,
    pub pct_tie: f64,
    pub pct_win_b: f64,
    pub pct_censored: f64,
    /// Duration of every replica in replica order, censored ones included.
    pub durations: Vec<u64>,
    /// Result of every replica in replica order.
    pub results: Vec<GameResult>,
    pub duration_mean: Option<f64>,
    /// Population standard deviation.
    pub duration_std: Option<f64>,
}

impl BatchStats {
    pub fn from_outcomes(outcomes: &[GameOutcome]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidParameter("a batch needs at least one run".into()));
        }
        let mut counts = OutcomeCounts::default();
        // Welford accumulation over terminated durations.
        let (mut n, mut mean, mut m2) = (0u64, 0.0f64, 0.0f64);
        for o in outcomes {
            counts.record(o.result);
            if o.result != GameResult::Censored {
                n += 1;
                let x = o.duration as f64;
                let delta = x - mean;
                mean += delta / n as f64;
                m2 += delta * (x - mean);
            }
        }
        let runs = outcomes.len() as u64;
        let pct = |c: u64| 100.0 * c as f64 / runs as f64;
        Ok(BatchStats {
            runs,
            counts,
            pct_win_a: pct(counts.win_a),
            pct_tie: pct(counts.tie),
            pct_win_b: pct(counts.win_b),
            pct_censored: pct(counts.censored),
            durations: outcomes.iter().map(|o| o.duration).collect(),
            results: outcomes.iter().map(|o| o.result).collect(),
            duration_mean: (n > 0).then_some(mean),
            duration_std: (n > 0).then(|| (m2 / n as f64).sqrt()),
        })
    }

    /// Durations of the runs that ended before the cap.
    pub fn terminated_durations(&self) -> Vec<u64> {
        self.durations
            .iter()
            .zip(&self.results)
            .filter(|(_, &r)| r != GameResult::Censored)
            .map(|(&d, _)| d)
            .collect()
    }

    /// Standard error of the mean terminated duration.
    pub fn duration_sem(&self) -> Option<f64> {
        let n = self.runs - self.counts.censored;
        self.duration_std.map(|s| s / (n as f64).sqrt())
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))
}

fn collect_outcomes<F>(runs: u64, workers: usize, play: F) -> Result<Vec<GameOutcome>>
where
    F: Fn(u64) -> Result<GameOutcome> + Sync,
{
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be >= 1".into()));
    }
    let outcomes: Vec<Result<GameOutcome>> = if workers <= 1 {
        (0..runs).map(&play).collect()
    } else {
        pool(workers)?.install(|| (0..runs).into_par_iter().map(&play).collect())
    };
    outcomes
        .into_iter()
        .enumerate()
        .map(|(k, r)| r.map_err(|e| Error::Replica { replica: k as u64, source: Box::new(e) }))
        .collect()
}

/// Plays `runs` replicas of `config` on one fixed arena. `config.seed` is
/// ignored; replica `k` uses `derive_seed(base_seed, k)`.
pub fn run_batch(graph: &Graph, config: &GameConfig, runs: u64, base_seed: u64, workers: usize) -> Result<BatchStats> {
    config.validate()?;
    let outcomes = collect_outcomes(runs, workers, |k| {
        let cfg = GameConfig { seed: derive_seed(base_seed, k), ..*config };
        run_game(graph, &cfg)
    })?;
    BatchStats::from_outcomes(&outcomes)
}

/// As [`run_batch`] but every replica plays on its own freshly generated
/// arena, seeded from the replica seed.
pub fn run_batch_resampled(
    topology: &Topology,
    config: &GameConfig,
    runs: u64,
    base_seed: u64,
    workers: usize,
) -> Result<BatchStats> {
    config.validate()?;
    let outcomes = collect_outcomes(runs, workers, |k| {
        let seed = derive_seed(base_seed, k);
        let graph = topology.generate(derive_seed(seed ^ ARENA_SALT, 0))?;
        run_game(&graph, &GameConfig { seed, ..*config })
    })?;
    BatchStats::from_outcomes(&outcomes)
}

/// Whether a sweep shares one arena per topology across all replicas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArenaSampling {
    #[default]
    PerSweep,
    PerRun,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub runs: u64,
    pub base_seed: u64,
    pub players_per_team: u32,
    pub max_iterations: u64,
    pub workers: usize,
    pub sampling: ArenaSampling,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            runs: 10_000,
            base_seed: 0,
            players_per_team: 10,
            max_iterations: crate::engine::DEFAULT_MAX_ITERATIONS,
            workers: 1,
            sampling: ArenaSampling::PerSweep,
        }
    }
}

/// One (game, topology) cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub game: GameKind,
    pub topology: Topology,
    /// Average degree of the shared arena; `None` under per-run sampling.
    pub arena_avg_degree: Option<f64>,
    pub stats: BatchStats,
}

impl CaseResult {
    pub fn label(&self) -> String {
        format!("{}-{}", self.game, self.topology.kind())
    }

    /// More than half the runs hit the iteration cap: the case is treated
    /// as non-terminating and left out of duration-based analyses.
    pub fn mostly_censored(&self) -> bool {
        2 * self.stats.counts.censored > self.stats.runs
    }
}

/// Runs every (game, topology) pair. Rows come out game-major, in the order
/// the two lists are given. Under [`ArenaSampling::PerSweep`] each topology's
/// arena is generated once from [`arena_seed`], so a sub-sweep reproduces
/// the matching rows of a full sweep.
pub fn sweep(topologies: &[Topology], games: &[GameKind], opts: &SweepOptions) -> Result<Vec<CaseResult>> {
    if topologies.is_empty() || games.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one game and one topology".into()));
    }
    let arenas = topologies
        .iter()
        .map(|t| match opts.sampling {
            ArenaSampling::PerSweep => t.generate(arena_seed(opts.base_seed, t.kind())).map(Some),
            ArenaSampling::PerRun => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(topologies.len() * games.len());
    for &game in games {
        let config = GameConfig {
            game,
            players_per_team: opts.players_per_team,
            max_iterations: opts.max_iterations,
            seed: 0,
        };
        for (topology, arena) in topologies.iter().zip(&arenas) {
            let stats = match arena {
                Some(g) => run_batch(g, &config, opts.runs, opts.base_seed, opts.workers)?,
                None => run_batch_resampled(topology, &config, opts.runs, opts.base_seed, opts.workers)?,
            };
            rows.push(CaseResult {
                game,
                topology: *topology,
                arena_avg_degree: arena.as_ref().map(Graph::average_degree),
                stats,
            });
        }
    }
    Ok(rows)
}

/// Duration histogram over half-open bins `[e_i, e_{i+1})`; the last bin is
/// closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub normalized: Vec<f64>,
}

pub fn make_histogram(durations: &[u64], bin_edges: &[f64]) -> Result<Histogram> {
    if bin_edges.len() < 2 {
        return Err(Error::InvalidParameter("histogram needs at least two bin edges".into()));
    }
    if bin_edges.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::InvalidParameter("bin edges must be strictly increasing".into()));
    }
    let (lo, hi) = (bin_edges[0], bin_edges[bin_edges.len() - 1]);
    let bins = bin_edges.len() - 1;
    let mut counts = vec![0u64; bins];
    for &d in durations {
        let x = d as f64;
        if x < lo || x > hi {
            return Err(Error::OutOfRange { value: x, lo, hi });
        }
        // Index of the last edge <= x, clamped into the final closed bin.
        let idx = bin_edges.partition_point(|&e| e <= x).saturating_sub(1).min(bins - 1);
        counts[idx] += 1;
    }
    let total: u64 = counts.iter().sum();
    let normalized = counts
        .iter()
        .map(|&c| if total > 0 { c as f64 / total as f64 } else { 0.0 })
        .collect();
    Ok(Histogram { bin_edges: bin_edges.to_vec(), counts, normalized })
}

/// `bins` equal-width bins spanning the pooled min..max of every sample, so
/// histograms built from them line up bin by bin.
pub fn shared_bin_edges<'a, I>(samples: I, bins: usize) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = &'a [u64]>,
{
    if bins == 0 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    let mut range: Option<(u64, u64)> = None;
    for s in samples {
        for &d in s {
            range = Some(match range {
                Some((lo, hi)) => (lo.min(d), hi.max(d)),
                None => (d, d),
            });
        }
    }
    let (lo, hi) = range.ok_or_else(|| Error::InvalidInput("no durations to bin".into()))?;
    let (lo, hi) = if lo == hi { (lo as f64 - 0.5, hi as f64 + 0.5) } else { (lo as f64, hi as f64) };
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
    edges.push(hi);
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::make_reg;

    #[test]
    fn derived_seeds_are_distinct_and_stable() {
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|k| derive_seed(42, k)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_eq!(derive_seed(42, 7), derive_seed(42, 7));
        assert_ne!(derive_seed(42, 7), derive_seed(43, 7));
        // SplitMix64 reference: first output for state 0 is 0xE220A8397B1DCDAF.
        assert_eq!(derive_seed(0, 0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn histogram_hand_counts() {
        let h = make_histogram(&[1, 1, 2], &[0.0, 1.5, 3.0]).unwrap();
        assert_eq!(h.counts, vec![2, 1]);
        assert_eq!(h.normalized, vec![2.0 / 3.0, 1.0 / 3.0]);

        let h = make_histogram(&[], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(h.counts, vec![0, 0]);
        assert_eq!(h.normalized, vec![0.0, 0.0]);

        // Right edge belongs to the last bin, left edges open each bin.
        let h = make_histogram(&[0, 1, 2], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(h.counts, vec![1, 2]);
    }

    #[test]
    fn histogram_range_errors() {
        match make_histogram(&[5], &[0.0, 1.0]) {
            Err(Error::OutOfRange { value, .. }) => assert_eq!(value, 5.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(make_histogram(&[0], &[1.0, 1.0]).is_err());
        assert!(make_histogram(&[0], &[1.0]).is_err());
    }

    #[test]
    fn shared_edges_align_pooled_samples() {
        let a: &[u64] = &[10, 20, 30];
        let b: &[u64] = &[5, 45];
        let edges = shared_bin_edges([a, b], 4).unwrap();
        assert_eq!(edges, vec![5.0, 15.0, 25.0, 35.0, 45.0]);
        let ha = make_histogram(a, &edges).unwrap();
        let hb = make_histogram(b, &edges).unwrap();
        assert_eq!(ha.counts.len(), hb.counts.len());
        assert_eq!(ha.counts, vec![1, 1, 1, 0]);
        assert_eq!(hb.counts, vec![1, 0, 0, 1]);
        let single = shared_bin_edges([&[7u64][..]], 3).unwrap();
        assert_eq!(single.first(), Some(&6.5));
        assert_eq!(single.last(), Some(&7.5));
    }

    #[test]
    fn single_run_batch() {
        let g = make_reg(5).unwrap();
        let stats = run_batch(&g, &GameConfig::new(GameKind::G2, 0), 1, 9, 1).unwrap();
        assert_eq!(stats.durations.len(), 1);
        for p in [stats.pct_win_a, stats.pct_tie, stats.pct_win_b, stats.pct_censored] {
            assert!(p == 0.0 || p == 100.0);
        }
        assert_eq!(stats.duration_std, Some(0.0));
    }

    #[test]
    fn censored_runs_are_excluded_from_duration_moments() {
        let outcomes = [
            GameOutcome { result: GameResult::Tie, duration: 10 },
            GameOutcome { result: GameResult::Censored, duration: 100 },
            GameOutcome { result: GameResult::WinA, duration: 20 },
        ];
        let s = BatchStats::from_outcomes(&outcomes).unwrap();
        assert_eq!(s.duration_mean, Some(15.0));
        assert_eq!(s.duration_std, Some(5.0));
        assert_eq!(s.terminated_durations(), vec![10, 20]);
        assert_eq!(s.durations, vec![10, 100, 20]);
        let all_cut = BatchStats::from_outcomes(&outcomes[1..2]).unwrap();
        assert_eq!(all_cut.duration_mean, None);
        assert!(BatchStats::from_outcomes(&[]).is_err());
    }

    #[test]
    fn replica_errors_carry_their_index() {
        let tiny = Graph::from_edges(1, []).unwrap();
        match run_batch(&tiny, &GameConfig::new(GameKind::G1, 0), 3, 0, 1) {
            Err(Error::Replica { replica: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sweep_shape() {
        let topologies = [Topology::default_for(TopologyKind::Reg), Topology::default_for(TopologyKind::Ba)];
        let opts = SweepOptions { runs: 20, ..Default::default() };
        let rows = sweep(&topologies, &[GameKind::G1, GameKind::G2], &opts).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3].label(), "G2-BA");
        assert_eq!(rows[0].arena_avg_degree, Some(5.76));
        let single = sweep(&topologies[1..], &[GameKind::G2], &opts).unwrap();
        assert_eq!(single[0], rows[3]);
        assert!(sweep(&[], &[GameKind::G1], &opts).is_err());
    }
}
