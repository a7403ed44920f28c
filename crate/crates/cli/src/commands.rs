use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use netgames::engine::{run_game_observed, GameConfig, GameKind};
use netgames::graph::Graph;
use netgames::graphgen::{Topology, TopologyKind};
use netgames::io::{
    cases_csv, durations_csv, histogram_svg, summary_line, table_csv, to_pretty_json, write_text, BatchResults,
    RunManifest,
};
use netgames::montecarlo::{
    arena_seed, derive_seed, make_histogram, run_batch, shared_bin_edges, sweep, ArenaSampling, CaseResult,
    SweepOptions,
};
use netgames::simnet::{build_similarity_network, feature_pipeline, FeatureMode, PipelineOptions};
use netgames::{Error, Result};

use crate::args::{AnalyzeArgs, GenNetworkArgs, SimulateArgs, SweepArgs, TopologyParams};

pub const SWEEP_FILE: &str = "sweep.json";

fn topology(kind: TopologyKind, p: &TopologyParams) -> Topology {
    match kind {
        TopologyKind::Reg => Topology::Reg { side: p.side },
        TopologyKind::Er => Topology::Er { n: p.n, avg_degree: p.avg_degree },
        TopologyKind::Ba => Topology::Ba { n: p.n, m: p.m, m0: p.m0 },
        TopologyKind::Geo => Topology::Geo { side: p.side, perturbation: p.perturbation },
    }
}

fn manifest_path(out: &Path) -> std::path::PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "graph".into());
    out.with_file_name(format!("{stem}.manifest.json"))
}

pub fn gen_network(args: &GenNetworkArgs) -> Result<()> {
    let topology = topology(args.kind.into(), &args.params);
    let mut manifest = RunManifest::new("gen-network", args.seed);
    manifest.topologies = vec![topology];
    let graph = topology.generate(args.seed)?;
    write_text(&args.out, &graph.to_json())?;
    manifest.set("out", &args.out)?;
    manifest.finish(&manifest_path(&args.out))?;
    println!(
        "{}: {} nodes, {} edges, average degree {:.4}",
        topology.kind(),
        graph.node_count(),
        graph.edge_count(),
        graph.average_degree()
    );
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read graph {}: {e}", path.display())))?;
    Graph::from_json(&text).map_err(|e| Error::InvalidInput(format!("invalid graph {}: {e}", path.display())))
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let graph = read_graph(&args.graph)?;
    let game: GameKind = args.game.into();
    let run = &args.run;
    let config = GameConfig { game, players_per_team: run.players, max_iterations: run.max_iters, seed: run.seed };
    let mut manifest = RunManifest::new("simulate", run.seed);
    manifest.games = vec![game];
    manifest.runs = Some(run.runs);
    manifest.players_per_team = Some(run.players);
    manifest.max_iterations = Some(run.max_iters);
    manifest.set("graph_file", &args.graph)?;
    manifest.set("graph", serde_json::from_str::<serde_json::Value>(&graph.to_json())?)?;

    let stats = run_batch(&graph, &config, run.runs, run.seed, run.workers)?;
    let out = &args.out;
    write_text(&out.join("results.json"), &to_pretty_json(&BatchResults::new(config, run.seed, &stats))?)?;
    write_text(&out.join("durations.csv"), &durations_csv(&stats))?;
    if args.svg {
        let terminated = stats.terminated_durations();
        if !terminated.is_empty() {
            let edges = shared_bin_edges([terminated.as_slice()], args.bins)?;
            let hist = make_histogram(&terminated, &edges)?;
            write_text(&out.join("durations.svg"), &histogram_svg(&hist, &format!("{game} durations")))?;
        }
    }
    if let Some(path) = &args.trace {
        write_trace(&graph, &config, run.seed, args.trace_replica, path)?;
        manifest.set("trace_file", path)?;
        manifest.set("trace_replica", args.trace_replica)?;
    }
    manifest.finish(&out.join("manifest.json"))?;
    println!("{}", summary_line(game.label(), &stats));
    Ok(())
}

fn write_trace(graph: &Graph, config: &GameConfig, base_seed: u64, replica: u64, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    let cfg = GameConfig { seed: derive_seed(base_seed, replica), ..*config };
    let mut failure = None;
    run_game_observed(graph, &cfg, |record, _| {
        if failure.is_none() {
            let line = serde_json::to_string(record).map_err(Error::from);
            if let Err(e) = line.and_then(|l| writeln!(w, "{l}").map_err(Error::from)) {
                failure = Some(e);
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_cmd(args: &SweepArgs) -> Result<()> {
    let topologies: Vec<Topology> = args.topologies.iter().map(|&t| topology(t.into(), &args.params)).collect();
    let games: Vec<GameKind> = args.games.iter().map(|&g| g.into()).collect();
    let run = &args.run;
    let sampling = if args.resample_per_run { ArenaSampling::PerRun } else { ArenaSampling::PerSweep };
    let opts = SweepOptions {
        runs: run.runs,
        base_seed: run.seed,
        players_per_team: run.players,
        max_iterations: run.max_iters,
        workers: run.workers,
        sampling,
    };
    let mut manifest = RunManifest::new("sweep", run.seed);
    manifest.topologies = topologies.clone();
    manifest.games = games.clone();
    manifest.runs = Some(run.runs);
    manifest.players_per_team = Some(run.players);
    manifest.max_iterations = Some(run.max_iters);
    manifest.sampling = Some(sampling);

    let rows = sweep(&topologies, &games, &opts)?;
    let out = &args.out;
    if sampling == ArenaSampling::PerSweep {
        for t in &topologies {
            let graph = t.generate(arena_seed(run.seed, t.kind()))?;
            write_text(&out.join("arenas").join(format!("{}.json", t.kind())), &graph.to_json())?;
        }
    }
    write_text(&out.join(SWEEP_FILE), &to_pretty_json(&rows)?)?;
    write_text(&out.join("cases.csv"), &cases_csv(&rows))?;
    write_text(&out.join("table.csv"), &table_csv(&rows))?;
    for r in &rows {
        write_text(&out.join("durations").join(format!("{}.csv", r.label())), &durations_csv(&r.stats))?;
    }
    if args.svg {
        let samples: Vec<Vec<u64>> = rows.iter().map(|r| r.stats.terminated_durations()).collect();
        if samples.iter().any(|s| !s.is_empty()) {
            let edges = shared_bin_edges(samples.iter().map(Vec::as_slice), args.bins)?;
            for (r, s) in rows.iter().zip(&samples) {
                let hist = make_histogram(s, &edges)?;
                let svg = histogram_svg(&hist, &format!("{} durations", r.label()));
                write_text(&out.join("histograms").join(format!("{}.svg", r.label())), &svg)?;
            }
        }
    }
    manifest.finish(&out.join("manifest.json"))?;
    for r in &rows {
        println!("{}", summary_line(&r.label(), &r.stats));
    }
    Ok(())
}

pub fn read_sweep(dir: &Path) -> Result<Vec<CaseResult>> {
    let path = dir.join(SWEEP_FILE);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::InvalidInput(format!("cannot read sweep results {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let games: Vec<GameKind> = args.games.iter().map(|&g| g.into()).collect();
    let kinds: Vec<TopologyKind> = args.topologies.iter().map(|&t| t.into()).collect();
    let mode: FeatureMode = args.features.into();
    let mut cases: Vec<CaseResult> = read_sweep(&args.input)?
        .into_iter()
        .filter(|c| games.is_empty() || games.contains(&c.game))
        .filter(|c| kinds.is_empty() || kinds.contains(&c.topology.kind()))
        .collect();
    let mut dropped = Vec::new();
    if mode.uses_durations() {
        cases.retain(|c| {
            let keep = !c.mostly_censored();
            if !keep {
                dropped.push(c.label());
            }
            keep
        });
    }
    let opts = PipelineOptions { bins: args.bins, normalization: args.normalization.into(), shift: args.shift };
    let matrix = feature_pipeline(&cases, mode, &opts)?;
    let network = build_similarity_network(&matrix, args.d, args.regularization, args.threshold)?;

    let mut manifest = RunManifest::new("analyze", 0);
    if let Ok(source) = RunManifest::from_file(&args.input.join("manifest.json")) {
        manifest.base_seed = source.base_seed;
    }
    manifest.set("input", &args.input)?;
    manifest.set("features", mode)?;
    manifest.set("pipeline", opts)?;
    manifest.set("d", args.d)?;
    manifest.set("regularization", args.regularization)?;
    manifest.set("threshold", args.threshold)?;
    manifest.set("cases", matrix.labels())?;
    manifest.set("dropped_cases", &dropped)?;

    let out = &args.out;
    write_text(&out.join("network.csv"), &network.to_csv())?;
    write_text(&out.join("network.json"), &network.to_json())?;
    write_text(&out.join("features.json"), &to_pretty_json(&matrix)?)?;
    manifest.finish(&out.join("manifest.json"))?;
    if !dropped.is_empty() {
        println!("dropped non-terminating cases: {}", dropped.join(", "));
    }
    println!(
        "{} features, {} cases, {} links (D = {}, threshold = {})",
        mode,
        network.len(),
        network.edges().len(),
        args.d,
        args.threshold
    );
    Ok(())
}
