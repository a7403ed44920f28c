//! File formats shared by the command-line tool: run manifests, batch
//! results, sweep tables, duration listings and SVG histograms.
//!
//! All numbers are written with Rust's formatter, which always uses `.` as
//! the decimal separator, at fixed precision.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::engine::{GameConfig, GameKind};
use crate::error::Result;
use crate::graphgen::{Topology, TopologyKind};
use crate::montecarlo::{ArenaSampling, BatchStats, CaseResult, Histogram, OutcomeCounts};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to regenerate the files written next to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topologies: Vec<Topology>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub games: Vec<GameKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub players_per_team: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<ArenaSampling>,
    /// Command-specific settings (input files, analysis parameters, dropped
    /// cases).
    #[serde(default)]
    pub settings: serde_json::Map<String, serde_json::Value>,
    /// Seconds since the Unix epoch.
    pub started_at: u64,
    pub finished_at: u64,
}

impl RunManifest {
    pub fn new(command: &str, base_seed: u64) -> Self {
        RunManifest {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            base_seed,
            topologies: Vec::new(),
            games: Vec::new(),
            runs: None,
            players_per_team: None,
            max_iterations: None,
            sampling: None,
            settings: serde_json::Map::new(),
            started_at: unix_now(),
            finished_at: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.settings.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    /// Stamps the finish time and writes pretty JSON.
    pub fn finish(mut self, path: &Path) -> Result<()> {
        self.finished_at = unix_now();
        write_text(path, &to_pretty_json(&self)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Creates parent directories as needed.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// Results of one batch as written by `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResults {
    pub config: GameConfig,
    pub base_seed: u64,
    pub runs: u64,
    pub outcome_counts: OutcomeCounts,
    pub pct_win_a: f64,
    pub pct_tie: f64,
    pub pct_win_b: f64,
    pub pct_censored: f64,
    pub duration_mean: Option<f64>,
    pub duration_std: Option<f64>,
    pub durations: Vec<u64>,
}

impl BatchResults {
    pub fn new(config: GameConfig, base_seed: u64, stats: &BatchStats) -> Self {
        BatchResults {
            config,
            base_seed,
            runs: stats.runs,
            outcome_counts: stats.counts,
            pct_win_a: stats.pct_win_a,
            pct_tie: stats.pct_tie,
            pct_win_b: stats.pct_win_b,
            pct_censored: stats.pct_censored,
            duration_mean: stats.duration_mean,
            duration_std: stats.duration_std,
            durations: stats.durations.clone(),
        }
    }
}

/// `replica,result,duration` for every replica.
pub fn durations_csv(stats: &BatchStats) -> String {
    let mut out = String::from("replica,result,duration\n");
    for (k, (d, r)) in stats.durations.iter().zip(&stats.results).enumerate() {
        let _ = writeln!(out, "{k},{},{d}", r.label());
    }
    out
}

/// One line summary: `G2 on REG: A 48.71% tie 3.21% B 48.08% censored 0.00% ...`.
pub fn summary_line(label: &str, stats: &BatchStats) -> String {
    let mut line = format!(
        "{label}: runs {} | A {:.2}% tie {:.2}% B {:.2}% censored {:.2}%",
        stats.runs, stats.pct_win_a, stats.pct_tie, stats.pct_win_b, stats.pct_censored
    );
    match (stats.duration_mean, stats.duration_std) {
        (Some(m), Some(s)) => {
            let _ = write!(line, " | duration {m:.1} +- {s:.1}");
        }
        _ => line.push_str(" | no terminated runs"),
    }
    if stats.pct_censored >= 99.0 {
        line.push_str(" | games never end");
    }
    line
}

fn cell(s: &BatchStats) -> String {
    format!("{:.2}/{:.2}/{:.2}/{:.2}", s.pct_win_a, s.pct_tie, s.pct_win_b, s.pct_censored)
}

fn opt(x: Option<f64>, digits: usize) -> String {
    x.map(|v| format!("{v:.digits$}")).unwrap_or_default()
}

/// One row per case, in sweep order.
pub fn cases_csv(rows: &[CaseResult]) -> String {
    let mut out = String::from(
        "game,topology,runs,p_a,p_tie,p_b,p_censored,duration_mean,duration_std,arena_avg_degree\n",
    );
    for r in rows {
        let s = &r.stats;
        let _ = writeln!(
            out,
            "{},{},{},{:.2},{:.2},{:.2},{:.2},{},{},{}",
            r.game,
            r.topology.kind(),
            s.runs,
            s.pct_win_a,
            s.pct_tie,
            s.pct_win_b,
            s.pct_censored,
            opt(s.duration_mean, 3),
            opt(s.duration_std, 3),
            opt(r.arena_avg_degree, 4),
        );
    }
    out
}

/// Games as rows, topologies as columns, cells `p_A/p_tie/p_B/p_cens`.
/// Missing combinations are left empty.
pub fn table_csv(rows: &[CaseResult]) -> String {
    let mut games: Vec<GameKind> = Vec::new();
    let mut kinds: Vec<TopologyKind> = Vec::new();
    for r in rows {
        if !games.contains(&r.game) {
            games.push(r.game);
        }
        if !kinds.contains(&r.topology.kind()) {
            kinds.push(r.topology.kind());
        }
    }
    let mut out = String::from("game");
    for k in &kinds {
        let _ = write!(out, ",{k}");
    }
    out.push('\n');
    for g in &games {
        out.push_str(g.label());
        for k in &kinds {
            let c = rows.iter().find(|r| r.game == *g && r.topology.kind() == *k);
            let _ = write!(out, ",{}", c.map(|r| cell(&r.stats)).unwrap_or_default());
        }
        out.push('\n');
    }
    out
}

/// Bar chart of a histogram's normalized counts as standalone SVG markup.
pub fn histogram_svg(hist: &Histogram, title: &str) -> String {
    let (w, h, pad) = (480.0, 240.0, 30.0);
    let bins = hist.counts.len().max(1);
    let bar = (w - 2.0 * pad) / bins as f64;
    let top = hist.normalized.iter().cloned().fold(0.0, f64::max);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <text x=\"{pad}\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
        escape(title)
    );
    for (i, &p) in hist.normalized.iter().enumerate() {
        let bh = if top > 0.0 { p / top * (h - 2.0 * pad) } else { 0.0 };
        let _ = writeln!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"steelblue\"/>",
            pad + i as f64 * bar,
            h - pad - bh,
            bar,
            bh
        );
    }
    if let (Some(lo), Some(hi)) = (hist.bin_edges.first(), hist.bin_edges.last()) {
        let _ = writeln!(
            svg,
            "<text x=\"{pad}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"11\">{lo:.0}</text>\n\
             <text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{hi:.0}</text>",
            h - 10.0,
            w - pad,
            h - 10.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
