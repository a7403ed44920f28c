use netgames::engine::{
    init_state, proximity_score, run_game, run_game_observed, valid_destinations, GameConfig, GameKind, GameRng,
    GameState, Removal, StepRecord, Team,
};
use netgames::graphgen::{make_er, Topology, TopologyKind};
use netgames::Graph;
use proptest::prelude::*;
use rand::SeedableRng;

fn arena() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (prop::sample::select(TopologyKind::ALL.to_vec()), any::<u64>())
            .prop_map(|(k, s)| Topology::default_for(k).generate(s).unwrap()),
        (4usize..12, any::<u64>()).prop_map(|(n, s)| make_er(n, 2.5, s).unwrap()),
    ]
}

fn game() -> impl Strategy<Value = GameKind> {
    prop::sample::select(GameKind::ALL.to_vec())
}

/// Teammates on the nodes adjacent to `node`, counted player by player.
fn naive_score(state: &GameState, graph: &Graph, node: usize, team: Team, exclude_self_at: Option<usize>) -> u32 {
    let mut n = state.positions(team).iter().filter(|&&p| graph.has_edge(p, node)).count() as u32;
    if let Some(at) = exclude_self_at {
        if graph.has_edge(at, node) && state.count(at, team) > 0 {
            n -= 1;
        }
    }
    n
}

fn check_step(before: &GameState, after: &GameState, graph: &Graph, game: GameKind, rec: &StepRecord) -> Result<(), String> {
    after.check_invariants(graph).map_err(|e| e.to_string())?;
    let (a0, b0, a1, b1) = (before.alive(Team::A), before.alive(Team::B), after.alive(Team::A), after.alive(Team::B));
    if a1 > a0 || b1 > b0 || a0 + b0 - a1 - b1 > 2 {
        return Err(format!("alive {a0}/{b0} -> {a1}/{b1}"));
    }
    if (a1 as i64 - b1 as i64).abs().abs_diff((a0 as i64 - b0 as i64).abs()) > 1 {
        return Err("alive difference jumped".into());
    }
    if game == GameKind::G1 && a1 != b1 {
        return Err("G1 removals must be pairwise".into());
    }
    for (t, team) in [Team::A, Team::B].into_iter().enumerate() {
        let options = valid_destinations(before, graph, rec.movers[t], team);
        if before.count(rec.movers[t], team) == 0 {
            return Err(format!("{team:?} mover not on its node"));
        }
        match rec.destinations[t] {
            None if !options.is_empty() => return Err(format!("{team:?} stayed with options {options:?}")),
            Some(v) if !options.contains(&v) => return Err(format!("{team:?} moved to invalid {v}")),
            _ => {}
        }
    }
    match (rec.destinations, rec.removal) {
        ([Some(x), Some(y)], Some(r)) if x == y => {
            if before.count(x, Team::A) + before.count(x, Team::B) != 0 {
                return Err(format!("encounter on occupied node {x}"));
            }
            let removed = (a0 - a1, b0 - b1);
            let expected = match r {
                Removal::Both => (1, 1),
                Removal::TeamA => (1, 0),
                Removal::TeamB => (0, 1),
            };
            if removed != expected {
                return Err(format!("{r:?} removed {removed:?}"));
            }
        }
        ([x, y], None) if x.is_none() || x != y => {
            if (a0, b0) != (a1, b1) {
                return Err("players vanished without an encounter".into());
            }
        }
        _ => return Err(format!("inconsistent record {rec:?}")),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_step_keeps_the_rules(graph in arena(), game in game(), players in 1u32..12, seed in any::<u64>()) {
        let config = GameConfig { game, players_per_team: players, max_iterations: 3_000, seed };
        let mut before = {
            let mut rng = GameRng::seed_from_u64(seed);
            init_state(&graph, players, &mut rng).unwrap()
        };
        before.check_invariants(&graph).unwrap();
        let mut failure = None;
        let outcome = run_game_observed(&graph, &config, |rec, after| {
            if failure.is_none() {
                if let Err(e) = check_step(&before, after, &graph, game, rec) {
                    failure = Some(format!("iteration {}: {e}", rec.iteration));
                }
            }
            before = after.clone();
        }).unwrap();
        prop_assert!(failure.is_none(), "{}", failure.unwrap());
        prop_assert!(outcome.duration <= config.max_iterations);
        if game == GameKind::G1 {
            prop_assert!(matches!(outcome.result, netgames::GameResult::Tie | netgames::GameResult::Censored));
        }
    }

    #[test]
    fn replays_are_identical(graph in arena(), game in game(), seed in any::<u64>()) {
        let config = GameConfig { game, players_per_team: 10, max_iterations: 2_000, seed };
        let trace = || {
            let mut t = Vec::new();
            let o = run_game_observed(&graph, &config, |rec, _| t.push(*rec)).unwrap();
            (o, t)
        };
        let (o1, t1) = trace();
        let (o2, t2) = trace();
        prop_assert_eq!(o1, o2);
        prop_assert_eq!(t1.len() as u64, o1.duration);
        prop_assert_eq!(t1, t2);
        prop_assert_eq!(run_game(&graph, &config).unwrap(), o1);
    }

    #[test]
    fn proximity_matches_a_player_count(graph in arena(), players in 1u32..12, seed in any::<u64>()) {
        let mut rng = GameRng::seed_from_u64(seed);
        let state = init_state(&graph, players, &mut rng).unwrap();
        for team in [Team::A, Team::B] {
            for node in 0..graph.node_count() {
                prop_assert_eq!(proximity_score(&state, &graph, node, team, None), naive_score(&state, &graph, node, team, None));
                for &at in state.positions(team) {
                    prop_assert_eq!(
                        proximity_score(&state, &graph, node, team, Some(at)),
                        naive_score(&state, &graph, node, team, Some(at))
                    );
                }
            }
        }
    }
}
