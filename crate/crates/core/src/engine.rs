//! Single-replica game execution.
//!
//! Each iteration one player of each team is drawn uniformly among that
//! team's alive players. Both pick a destination against the same pre-move
//! state, both moves are applied, and if the two movers land on the same node
//! the encounter is resolved by the game's rule. A player may only move to an
//! adjacent node holding no adversaries; with no such node it stays put.
//!
//! Random draws per iteration happen in a fixed order (A mover, B mover, A
//! destination, B destination), so a replica is a pure function of its
//! graph and seed.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Generator driving every replica, seeded from the replica's seed.
pub type GameRng = Xoshiro256PlusPlus;

/// Default iteration cap; reaching it with both teams alive censors the run.
pub const DEFAULT_MAX_ITERATIONS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Team {
    A,
    B,
}

impl Team {
    pub fn index(self) -> usize {
        match self {
            Team::A => 0,
            Team::B => 1,
        }
    }

    pub fn adversary(self) -> Team {
        match self {
            Team::A => Team::B,
            Team::B => Team::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl GameKind {
    pub const ALL: [GameKind; 5] = [GameKind::G1, GameKind::G2, GameKind::G3, GameKind::G4, GameKind::G5];

    pub fn label(self) -> &'static str {
        match self {
            GameKind::G1 => "G1",
            GameKind::G2 => "G2",
            GameKind::G3 => "G3",
            GameKind::G4 => "G4",
            GameKind::G5 => "G5",
        }
    }

    /// How players of `team` pick their next node under this game.
    pub fn policy(self, team: Team) -> MovePolicy {
        match (self, team) {
            (GameKind::G1 | GameKind::G2, _) | (GameKind::G3, Team::B) => MovePolicy::Uniform,
            (GameKind::G3, Team::A) | (GameKind::G4, _) => MovePolicy::Greedy,
            (GameKind::G5, _) => MovePolicy::Preferential,
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g1" => Ok(GameKind::G1),
            "g2" => Ok(GameKind::G2),
            "g3" => Ok(GameKind::G3),
            "g4" => Ok(GameKind::G4),
            "g5" => Ok(GameKind::G5),
            other => Err(Error::InvalidParameter(format!("unknown game '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovePolicy {
    /// Uniform over valid destinations.
    Uniform,
    /// Highest proximity score, uniform among ties.
    Greedy,
    /// Random, weighted by proximity score + 1.
    Preferential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub game: GameKind,
    pub players_per_team: u32,
    pub max_iterations: u64,
    pub seed: u64,
}

impl GameConfig {
    pub fn new(game: GameKind, seed: u64) -> Self {
        GameConfig { game, players_per_team: 10, max_iterations: DEFAULT_MAX_ITERATIONS, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.players_per_team == 0 {
            return Err(Error::InvalidParameter("players_per_team must be >= 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameResult {
    WinA,
    WinB,
    Tie,
    Censored,
}

impl GameResult {
    pub fn label(self) -> &'static str {
        match self {
            GameResult::WinA => "win_a",
            GameResult::WinB => "win_b",
            GameResult::Tie => "tie",
            GameResult::Censored => "censored",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub result: GameResult,
    pub duration: u64,
}

/// Occupancy of every node by both teams, plus each alive player's node.
///
/// No node ever holds players of both teams between iterations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    counts: Vec<[u32; 2]>,
    // Per node and team, players on the adjacent nodes.
    near: Vec<[u32; 2]>,
    players: [Vec<usize>; 2],
    iteration: u64,
}

impl GameState {
    /// Empty board over `graph`; populate with [`GameState::place`].
    pub fn empty(graph: &Graph) -> Self {
        let n = graph.node_count();
        GameState { counts: vec![[0, 0]; n], near: vec![[0, 0]; n], players: [Vec::new(), Vec::new()], iteration: 0 }
    }

    /// Adds one player of `team` at `node`; fails if the adversary holds it.
    pub fn place(&mut self, graph: &Graph, node: usize, team: Team) -> Result<()> {
        if node >= self.counts.len() || graph.node_count() != self.counts.len() {
            return Err(Error::InvalidInput(format!("node {node} out of range")));
        }
        if self.counts[node][team.adversary().index()] > 0 {
            return Err(Error::InvalidInput(format!("node {node} is held by the adversary")));
        }
        self.add(graph, team, node);
        self.players[team.index()].push(node);
        Ok(())
    }

    fn add(&mut self, graph: &Graph, team: Team, node: usize) {
        let t = team.index();
        self.counts[node][t] += 1;
        for &u in graph.neighbors(node) {
            self.near[u][t] += 1;
        }
    }

    fn take(&mut self, graph: &Graph, team: Team, node: usize) {
        let t = team.index();
        self.counts[node][t] -= 1;
        for &u in graph.neighbors(node) {
            self.near[u][t] -= 1;
        }
    }

    pub fn count(&self, node: usize, team: Team) -> u32 {
        self.counts[node][team.index()]
    }

    pub fn alive(&self, team: Team) -> usize {
        self.players[team.index()].len()
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn node_count(&self) -> usize {
        self.counts.len()
    }

    /// Node of each alive player of `team`, in internal order.
    pub fn positions(&self, team: Team) -> &[usize] {
        &self.players[team.index()]
    }

    pub fn is_finished(&self) -> bool {
        self.alive(Team::A) == 0 || self.alive(Team::B) == 0
    }

    /// Checks the occupancy invariants; used by tests and debug assertions.
    pub fn check_invariants(&self, graph: &Graph) -> Result<()> {
        for v in 0..self.counts.len() {
            for t in 0..2 {
                let sum: u32 = graph.neighbors(v).iter().map(|&u| self.counts[u][t]).sum();
                if sum != self.near[v][t] {
                    return Err(Error::ContractViolation(format!("stale neighborhood count at node {v}")));
                }
            }
        }
        for (node, c) in self.counts.iter().enumerate() {
            if c[0] > 0 && c[1] > 0 {
                return Err(Error::ContractViolation(format!("node {node} holds both teams")));
            }
        }
        for team in [Team::A, Team::B] {
            let t = team.index();
            let total: u64 = self.counts.iter().map(|c| c[t] as u64).sum();
            if total != self.players[t].len() as u64 {
                return Err(Error::ContractViolation(format!("{team:?} counts disagree with roster")));
            }
            let mut tally = vec![0u32; self.counts.len()];
            for &p in &self.players[t] {
                tally[p] += 1;
            }
            if tally.iter().zip(&self.counts).any(|(&a, c)| a != c[t]) {
                return Err(Error::ContractViolation(format!("{team:?} roster disagrees per node")));
            }
        }
        Ok(())
    }

    fn relocate(&mut self, graph: &Graph, team: Team, slot: usize, to: usize) {
        let from = self.players[team.index()][slot];
        self.take(graph, team, from);
        self.add(graph, team, to);
        self.players[team.index()][slot] = to;
    }

    fn remove(&mut self, graph: &Graph, team: Team, slot: usize) {
        let node = self.players[team.index()].swap_remove(slot);
        self.take(graph, team, node);
    }
}

/// Random placement: players enter one at a time, alternating A, B, A, ...,
/// each on a node drawn uniformly among those without adversaries.
pub fn init_state<R: Rng + ?Sized>(graph: &Graph, players_per_team: u32, rng: &mut R) -> Result<GameState> {
    if graph.node_count() < 2 {
        return Err(Error::Initialization("arena needs at least 2 nodes".into()));
    }
    let mut state = GameState::empty(graph);
    let mut open = Vec::with_capacity(graph.node_count());
    for _ in 0..players_per_team {
        for team in [Team::A, Team::B] {
            let adv = team.adversary().index();
            open.clear();
            open.extend((0..graph.node_count()).filter(|&v| state.counts[v][adv] == 0));
            if open.is_empty() {
                return Err(Error::Initialization(format!("no node free of adversaries for {team:?}")));
            }
            let node = open[rng.gen_range(0..open.len())];
            state.place(graph, node, team)?;
        }
    }
    Ok(state)
}

/// Neighbors of `from` holding no adversary of `team`.
pub fn valid_destinations(state: &GameState, graph: &Graph, from: usize, team: Team) -> Vec<usize> {
    let mut out = Vec::new();
    collect_destinations(state, graph, from, team, &mut out);
    out
}

fn collect_destinations(state: &GameState, graph: &Graph, from: usize, team: Team, out: &mut Vec<usize>) {
    let adv = team.adversary().index();
    out.clear();
    out.extend(graph.neighbors(from).iter().copied().filter(|&v| state.counts[v][adv] == 0));
}

/// Players of `team` on the nodes adjacent to `node`. When `exclude_self_at`
/// is one of those nodes, one player there (the mover) is discounted.
pub fn proximity_score(
    state: &GameState,
    graph: &Graph,
    node: usize,
    team: Team,
    exclude_self_at: Option<usize>,
) -> u32 {
    let t = team.index();
    let score = state.near[node][t];
    match exclude_self_at {
        Some(at) if graph.has_edge(node, at) && state.counts[at][t] > 0 => score - 1,
        _ => score,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    To(usize),
    Stay,
}

/// Destination of a `team` player at `from` under `game`'s policy.
pub fn choose_move<R: Rng + ?Sized>(
    state: &GameState,
    graph: &Graph,
    from: usize,
    team: Team,
    game: GameKind,
    rng: &mut R,
) -> Move {
    let mut scratch = Scratch::default();
    pick_destination(state, graph, from, team, game.policy(team), rng, &mut scratch)
}

#[derive(Default)]
struct Scratch {
    ties: Vec<usize>,
}

fn pick_destination<R: Rng + ?Sized>(
    state: &GameState,
    graph: &Graph,
    from: usize,
    team: Team,
    policy: MovePolicy,
    rng: &mut R,
    scratch: &mut Scratch,
) -> Move {
    let (t, adv) = (team.index(), team.adversary().index());
    let open = |v: &&usize| state.counts[**v][adv] == 0;
    let neighbors = graph.neighbors(from);
    // Every option neighbors `from`, where the mover itself stands, hence
    // the `- 1` on neighborhood counts.
    match policy {
        MovePolicy::Uniform => {
            let n = neighbors.iter().filter(open).count();
            let k = match n {
                0 => return Move::Stay,
                1 => 0,
                _ => rng.gen_range(0..n),
            };
            Move::To(*neighbors.iter().filter(open).nth(k).expect("k < n"))
        }
        MovePolicy::Greedy => {
            let ties = &mut scratch.ties;
            ties.clear();
            let mut best = 0;
            for &c in neighbors.iter().filter(open) {
                let score = state.near[c][t] - 1;
                if ties.is_empty() || score > best {
                    ties.clear();
                    best = score;
                }
                if score == best {
                    ties.push(c);
                }
            }
            match ties.len() {
                0 => Move::Stay,
                1 => Move::To(ties[0]),
                n => Move::To(ties[rng.gen_range(0..n)]),
            }
        }
        MovePolicy::Preferential => {
            let weight = |c: usize| state.near[c][t] as u64;
            let (n, total) = neighbors.iter().filter(open).fold((0, 0), |(n, w), &c| (n + 1, w + weight(c)));
            match n {
                0 => return Move::Stay,
                1 => return Move::To(*neighbors.iter().find(open).expect("n == 1")),
                _ => {}
            }
            let mut ticket = rng.gen_range(0..total);
            for &c in neighbors.iter().filter(open) {
                let w = weight(c);
                if ticket < w {
                    return Move::To(c);
                }
                ticket -= w;
            }
            unreachable!("ticket within total weight")
        }
    }
}

/// Which mover(s) leave the game after an encounter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Removal {
    Both,
    TeamA,
    TeamB,
}

/// Settles an encounter at `node`, where one A mover and one B mover have
/// just arrived. G1 always cancels both; otherwise the mover with more
/// teammates adjacent to `node` wins, ties cancel both.
pub fn resolve_encounter(state: &GameState, graph: &Graph, node: usize, game: GameKind) -> Removal {
    if game == GameKind::G1 {
        return Removal::Both;
    }
    let a = proximity_score(state, graph, node, Team::A, Some(node));
    let b = proximity_score(state, graph, node, Team::B, Some(node));
    match a.cmp(&b) {
        std::cmp::Ordering::Greater => Removal::TeamB,
        std::cmp::Ordering::Less => Removal::TeamA,
        std::cmp::Ordering::Equal => Removal::Both,
    }
}

/// What happened during one iteration; emitted to trace observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub iteration: u64,
    pub movers: [usize; 2],
    pub destinations: [Option<usize>; 2],
    pub removal: Option<Removal>,
}

/// Advances `state` by one iteration.
pub fn step<R: Rng + ?Sized>(
    state: &mut GameState,
    graph: &Graph,
    config: &GameConfig,
    rng: &mut R,
) -> Result<StepRecord> {
    let mut scratch = Scratch::default();
    step_with(state, graph, config.game, rng, &mut scratch)
}

fn step_with<R: Rng + ?Sized>(
    state: &mut GameState,
    graph: &Graph,
    game: GameKind,
    rng: &mut R,
    scratch: &mut Scratch,
) -> Result<StepRecord> {
    if state.is_finished() {
        return Err(Error::ContractViolation("step called on a finished game".into()));
    }
    let slot_a = rng.gen_range(0..state.alive(Team::A));
    let slot_b = rng.gen_range(0..state.alive(Team::B));
    let from_a = state.players[0][slot_a];
    let from_b = state.players[1][slot_b];

    let move_a = pick_destination(state, graph, from_a, Team::A, game.policy(Team::A), rng, scratch);
    let move_b = pick_destination(state, graph, from_b, Team::B, game.policy(Team::B), rng, scratch);

    let dest = |m: Move| match m {
        Move::To(v) => Some(v),
        Move::Stay => None,
    };
    let (dest_a, dest_b) = (dest(move_a), dest(move_b));

    let mut removal = None;
    if let Some(v) = dest_a {
        state.relocate(graph, Team::A, slot_a, v);
    }
    if let Some(v) = dest_b {
        state.relocate(graph, Team::B, slot_b, v);
    }
    if let (Some(va), Some(vb)) = (dest_a, dest_b) {
        if va == vb {
            // Destinations exclude adversary nodes, so the meeting node was
            // empty before the move and now holds exactly the two movers.
            debug_assert_eq!(state.counts[va], [1, 1]);
            let r = resolve_encounter(state, graph, va, game);
            match r {
                Removal::Both => {
                    state.remove(graph, Team::A, slot_a);
                    state.remove(graph, Team::B, slot_b);
                }
                Removal::TeamA => state.remove(graph, Team::A, slot_a),
                Removal::TeamB => state.remove(graph, Team::B, slot_b),
            }
            removal = Some(r);
        }
    }
    state.iteration += 1;
    Ok(StepRecord { iteration: state.iteration, movers: [from_a, from_b], destinations: [dest_a, dest_b], removal })
}

/// Plays one replica to completion or to the iteration cap.
///
/// When both teams move greedily, the state is periodically tested for
/// absorption (see [`is_absorbing`]); an absorbed replica is reported as
/// censored at the cap without simulating the remaining iterations. The
/// outcome is the same one full simulation would produce.
pub fn run_game(graph: &Graph, config: &GameConfig) -> Result<GameOutcome> {
    config.validate()?;
    let mut rng = GameRng::seed_from_u64(config.seed);
    let mut state = init_state(graph, config.players_per_team, &mut rng)?;
    let mut scratch = Scratch::default();
    let greedy = [Team::A, Team::B].iter().all(|&t| config.game.policy(t) == MovePolicy::Greedy);
    let mut memo = AbsorbMemo::default();
    let (mut next_check, mut gap) = (FIRST_ABSORB_CHECK, FIRST_ABSORB_CHECK);
    while !state.is_finished() && state.iteration < config.max_iterations {
        step_with(&mut state, graph, config.game, &mut rng, &mut scratch)?;
        if greedy && state.iteration == next_check {
            if memo.check(graph, &state) {
                return Ok(GameOutcome { result: GameResult::Censored, duration: config.max_iterations });
            }
            gap = (gap * 2).min(LAST_ABSORB_CHECK_GAP);
            next_check += gap;
        }
    }
    Ok(finish(&state))
}

/// As [`run_game`], calling `observe` after every iteration. Every iteration
/// is simulated.
pub fn run_game_observed<F>(graph: &Graph, config: &GameConfig, mut observe: F) -> Result<GameOutcome>
where
    F: FnMut(&StepRecord, &GameState),
{
    config.validate()?;
    let mut rng = GameRng::seed_from_u64(config.seed);
    let mut state = init_state(graph, config.players_per_team, &mut rng)?;
    let mut scratch = Scratch::default();
    while !state.is_finished() && state.iteration < config.max_iterations {
        let record = step_with(&mut state, graph, config.game, &mut rng, &mut scratch)?;
        observe(&record, &state);
    }
    Ok(finish(&state))
}

fn finish(state: &GameState) -> GameOutcome {
    let result = match (state.alive(Team::A), state.alive(Team::B)) {
        (0, 0) => GameResult::Tie,
        (0, _) => GameResult::WinB,
        (_, 0) => GameResult::WinA,
        _ => GameResult::Censored,
    };
    GameOutcome { result, duration: state.iteration }
}

/// True when, with both teams moving greedily, no encounter can ever occur
/// again from `state`.
///
/// Each team's reachable occupancy patterns are enumerated on their own,
/// letting the adversary block any of the mover's options that lie in the
/// adversary's territory (the nodes its patterns touch). Territories are
/// widened alternately until neither changes. Every real trajectory then
/// stays inside the enumerated patterns, so if the two territories are
/// disjoint the movers can never share a destination and the game can only
/// be censored. Large explorations yield `false`.
pub fn is_absorbing(graph: &Graph, state: &GameState) -> bool {
    AbsorbMemo::default().check(graph, state)
}

type Occupancy = Vec<u8>;

struct Exploration {
    territory: Vec<usize>,
    patterns: HashSet<Occupancy>,
}

#[derive(Default)]
struct AbsorbMemo {
    // Reachable patterns of both teams from the last successful check.
    absorbed: Option<[HashSet<Occupancy>; 2]>,
}

impl AbsorbMemo {
    fn check(&mut self, graph: &Graph, state: &GameState) -> bool {
        if state.is_finished() || state.players.iter().any(|p| p.len() > u8::MAX as usize) {
            return false;
        }
        let now: [Occupancy; 2] =
            [0, 1].map(|t| state.counts.iter().map(|c| c[t] as u8).collect());
        if let Some(seen) = &self.absorbed {
            if seen[0].contains(&now[0]) && seen[1].contains(&now[1]) {
                return true;
            }
        }
        let occupied = |t: usize| (0..now[t].len()).filter(|&v| now[t][v] > 0).collect::<Vec<_>>();
        let mut terr_b = occupied(1);
        let mut terr_a = occupied(0);
        if terr_a.len() > MAX_OCCUPIED || terr_b.len() > MAX_OCCUPIED {
            return false;
        }
        for _ in 0..MAX_WIDENINGS {
            let Some(a) = explore_greedy(graph, &now[0], &terr_b) else { return false };
            let Some(b) = explore_greedy(graph, &now[1], &a.territory) else { return false };
            if a.territory == terr_a && b.territory == terr_b {
                if a.territory.iter().any(|v| b.territory.binary_search(v).is_ok()) {
                    return false;
                }
                self.absorbed = Some([a.patterns, b.patterns]);
                return true;
            }
            terr_a = a.territory;
            terr_b = b.territory;
        }
        false
    }
}

const FIRST_ABSORB_CHECK: u64 = 256;
const LAST_ABSORB_CHECK_GAP: u64 = 32_768;
const MAX_REACHABLE: usize = 512;
const MAX_WIDENINGS: usize = 8;
const MAX_OCCUPIED: usize = 6;
const MAX_BLOCKERS: usize = 6;

/// Occupancy patterns one team reaches from `start` moving greedily while
/// any subset of `hostile` nodes may be held by the adversary. `None` when
/// the search grows past a fixed size.
fn explore_greedy(graph: &Graph, start: &[u8], hostile: &[usize]) -> Option<Exploration> {
    let mut patterns = HashSet::from([start.to_vec()]);
    let mut queue = vec![start.to_vec()];
    let mut touched = BTreeSet::new();
    let mut options = Vec::new();
    while let Some(occ) = queue.pop() {
        let near = |c: usize| graph.neighbors(c).iter().map(|&u| occ[u] as u32).sum::<u32>();
        for from in (0..occ.len()).filter(|&v| occ[v] > 0) {
            touched.insert(from);
            let adjacent = graph.neighbors(from);
            let blockers: Vec<usize> =
                adjacent.iter().copied().filter(|v| hostile.binary_search(v).is_ok()).collect();
            if blockers.len() > MAX_BLOCKERS {
                return None;
            }
            for mask in 0u32..(1 << blockers.len()) {
                options.clear();
                options.extend(adjacent.iter().copied().filter(|v| {
                    blockers.iter().position(|b| b == v).is_none_or(|i| mask & (1 << i) == 0)
                }));
                let Some(best) = options.iter().map(|&c| near(c) - 1).max() else { continue };
                for &c in options.iter().filter(|&&c| near(c) - 1 == best) {
                    let mut next = occ.clone();
                    next[from] -= 1;
                    next[c] += 1;
                    if !patterns.contains(&next) {
                        if patterns.len() >= MAX_REACHABLE {
                            return None;
                        }
                        patterns.insert(next.clone());
                        queue.push(next);
                    }
                }
            }
        }
    }
    Some(Exploration { territory: touched.into_iter().collect(), patterns })
}
