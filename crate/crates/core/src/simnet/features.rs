use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, Normalization};
use crate::error::{Error, Result};
use crate::montecarlo::{make_histogram, shared_bin_edges, CaseResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    /// `[p_A, p_tie, p_B]`, censored runs counted as ties.
    Victories,
    /// Normalized duration histogram on bins shared by all cases.
    DurationsHist,
    /// `[duration_mean, duration_std]`.
    DurationsMoments,
    /// `[p_A, p_tie, p_B, duration_mean, duration_std]`.
    Combined,
}

impl FeatureMode {
    pub fn uses_durations(self) -> bool {
        self != FeatureMode::Victories
    }

    pub fn label(self) -> &'static str {
        match self {
            FeatureMode::Victories => "victories",
            FeatureMode::DurationsHist => "durations",
            FeatureMode::DurationsMoments => "moments",
            FeatureMode::Combined => "combined",
        }
    }
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "victories" => Ok(FeatureMode::Victories),
            "durations" | "durations_hist" => Ok(FeatureMode::DurationsHist),
            "moments" | "durations_moments" => Ok(FeatureMode::DurationsMoments),
            "combined" => Ok(FeatureMode::Combined),
            other => Err(Error::InvalidParameter(format!("unknown feature mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub bins: usize,
    pub normalization: Normalization,
    /// Offset added after standardizing when `normalization` is `Shifted`.
    pub shift: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { bins: 50, normalization: Normalization::Standardized, shift: 1.0 }
    }
}

/// Assembles one feature row per case and normalizes the columns.
///
/// Duration modes need every case to have terminated runs; drop
/// non-terminating cases first (see [`CaseResult::mostly_censored`]).
/// Histogram bins that are empty for every case are dropped before
/// standardizing.
pub fn feature_pipeline(cases: &[CaseResult], mode: FeatureMode, opts: &PipelineOptions) -> Result<FeatureMatrix> {
    if cases.len() < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 cases, got {}", cases.len())));
    }
    let labels: Vec<String> = cases.iter().map(CaseResult::label).collect();
    let moments = |c: &CaseResult| -> Result<[f64; 2]> {
        match (c.stats.duration_mean, c.stats.duration_std) {
            (Some(m), Some(s)) => Ok([m, s]),
            _ => Err(Error::InvalidInput(format!("case {} has no terminated runs", c.label()))),
        }
    };
    let victories = |c: &CaseResult| {
        let s = &c.stats;
        [s.pct_win_a, s.pct_tie + s.pct_censored, s.pct_win_b]
    };
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();

    let (columns, rows): (Vec<String>, Vec<Vec<f64>>) = match mode {
        FeatureMode::Victories => (names(&["p_a", "p_tie", "p_b"]), cases.iter().map(|c| victories(c).to_vec()).collect()),
        FeatureMode::DurationsMoments => (
            names(&["duration_mean", "duration_std"]),
            cases.iter().map(|c| moments(c).map(|m| m.to_vec())).collect::<Result<_>>()?,
        ),
        FeatureMode::Combined => (
            names(&["p_a", "p_tie", "p_b", "duration_mean", "duration_std"]),
            cases
                .iter()
                .map(|c| Ok(victories(c).iter().chain(&moments(c)?).copied().collect()))
                .collect::<Result<_>>()?,
        ),
        FeatureMode::DurationsHist => {
            let samples: Vec<Vec<u64>> = cases.iter().map(|c| c.stats.terminated_durations()).collect();
            if let Some(i) = samples.iter().position(Vec::is_empty) {
                return Err(Error::InvalidInput(format!("case {} has no terminated runs", labels[i])));
            }
            let edges = shared_bin_edges(samples.iter().map(Vec::as_slice), opts.bins)?;
            let rows = samples
                .iter()
                .map(|d| make_histogram(d, &edges).map(|h| h.normalized))
                .collect::<Result<Vec<_>>>()?;
            let columns = edges.windows(2).map(|w| format!("bin_{:.0}_{:.0}", w[0], w[1])).collect();
            (columns, rows)
        }
    };
    let mut matrix = FeatureMatrix::new(labels, columns, rows)?;
    if mode == FeatureMode::DurationsHist {
        matrix = matrix.drop_constant_columns()?;
    }
    normalize(&matrix, opts)
}

fn normalize(matrix: &FeatureMatrix, opts: &PipelineOptions) -> Result<FeatureMatrix> {
    match opts.normalization {
        Normalization::Raw => Ok(matrix.clone()),
        Normalization::Standardized => matrix.standardize(),
        Normalization::StandardizedRecentered => matrix.standardize()?.recenter(&matrix.column_means()),
        Normalization::Shifted => Ok(matrix.standardize()?.shift(opts.shift)),
    }
}
