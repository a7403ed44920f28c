//! Signed multiset similarity indices and coincidence similarity networks.
//!
//! Real vectors are compared as pairs of multisets: the positive parts and
//! the magnitudes of the negative parts. Jaccard divides the summed
//! componentwise minima by the summed maxima; interiority divides the same
//! common mass by the smaller of the two total absolute masses. Coincidence
//! is `J^D * I`, with `D` setting how strict the comparison is.

mod features;

pub use features::{feature_pipeline, FeatureMode, PipelineOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    Standardized,
    StandardizedRecentered,
    Shifted,
}

/// `N` labeled cases by `M` named features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    labels: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    normalization: Normalization,
}

impl FeatureMatrix {
    pub fn new(labels: Vec<String>, columns: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() < 2 || labels.len() != rows.len() {
            return Err(Error::InvalidInput(format!(
                "need at least 2 labeled rows, got {} rows and {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if columns.is_empty() {
            return Err(Error::InvalidInput("need at least one feature column".into()));
        }
        for (label, row) in labels.iter().zip(&rows) {
            if row.len() != columns.len() {
                return Err(Error::InvalidInput(format!(
                    "row {label} has {} values, expected {}",
                    row.len(),
                    columns.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("row {label} has a non-finite value")));
            }
        }
        Ok(FeatureMatrix { labels, columns, rows, normalization: Normalization::Raw })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[j])
    }

    pub fn column_means(&self) -> Vec<f64> {
        let n = self.rows.len() as f64;
        (0..self.columns.len()).map(|j| self.column(j).sum::<f64>() / n).collect()
    }

    /// Population standard deviation of each column.
    pub fn column_stds(&self) -> Vec<f64> {
        let n = self.rows.len() as f64;
        self.column_means()
            .iter()
            .enumerate()
            .map(|(j, &mu)| (self.column(j).map(|x| (x - mu).powi(2)).sum::<f64>() / n).sqrt())
            .collect()
    }

    /// Z-scores every column with its mean and population standard deviation.
    pub fn standardize(&self) -> Result<FeatureMatrix> {
        let means = self.column_means();
        let stds = self.column_stds();
        if let Some(j) = stds.iter().position(|&s| s == 0.0) {
            return Err(Error::ZeroVariance { column: j, name: self.columns[j].clone() });
        }
        Ok(self.map_columns(Normalization::Standardized, |j, x| (x - means[j]) / stds[j]))
    }

    /// Adds `means[j]` to column `j`, moving a standardized cloud back to
    /// the original center of mass.
    pub fn recenter(&self, means: &[f64]) -> Result<FeatureMatrix> {
        if means.len() != self.columns.len() {
            return Err(Error::InvalidInput(format!(
                "{} means for {} columns",
                means.len(),
                self.columns.len()
            )));
        }
        Ok(self.map_columns(Normalization::StandardizedRecentered, |j, x| x + means[j]))
    }

    /// Adds the same constant to every entry.
    pub fn shift(&self, offset: f64) -> FeatureMatrix {
        self.map_columns(Normalization::Shifted, |_, x| x + offset)
    }

    /// Removes columns whose values are all identical.
    pub fn drop_constant_columns(&self) -> Result<FeatureMatrix> {
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&j| {
                let first = self.rows[0][j];
                self.column(j).any(|x| x != first)
            })
            .collect();
        if keep.is_empty() {
            return Err(Error::InvalidInput("every feature column is constant".into()));
        }
        Ok(FeatureMatrix {
            labels: self.labels.clone(),
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            rows: self.rows.iter().map(|r| keep.iter().map(|&j| r[j]).collect()).collect(),
            normalization: self.normalization,
        })
    }

    fn map_columns<F: Fn(usize, f64) -> f64>(&self, tag: Normalization, f: F) -> FeatureMatrix {
        FeatureMatrix {
            labels: self.labels.clone(),
            columns: self.columns.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().enumerate().map(|(j, &x)| f(j, x)).collect())
                .collect(),
            normalization: tag,
        }
    }
}

/// Summed componentwise minima and maxima over positive and negative parts.
fn common_and_union(v: &[f64], r: &[f64]) -> Result<(f64, f64)> {
    if v.len() != r.len() {
        return Err(Error::InvalidInput(format!("vector lengths differ: {} vs {}", v.len(), r.len())));
    }
    let (mut common, mut union) = (0.0, 0.0);
    for (&a, &b) in v.iter().zip(r) {
        let (ap, an) = (a.max(0.0), (-a).max(0.0));
        let (bp, bn) = (b.max(0.0), (-b).max(0.0));
        common += ap.min(bp) + an.min(bn);
        union += ap.max(bp) + an.max(bn);
    }
    Ok((common, union))
}

fn abs_mass(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Jaccard similarity extended to real vectors with negative entries.
pub fn jaccard_signed(v: &[f64], r: &[f64]) -> Result<f64> {
    let (common, union) = common_and_union(v, r)?;
    if union == 0.0 {
        return Err(Error::UndefinedSimilarity("jaccard of two all-zero vectors".into()));
    }
    Ok(common / union)
}

/// Interiority (overlap) index extended to real vectors with negative entries.
pub fn interiority_signed(v: &[f64], r: &[f64]) -> Result<f64> {
    let (common, _) = common_and_union(v, r)?;
    let smaller = abs_mass(v).min(abs_mass(r));
    if smaller == 0.0 {
        return Err(Error::UndefinedSimilarity("interiority with an all-zero vector".into()));
    }
    Ok(common / smaller)
}

/// `J_reg^D * I`, where `J_reg` adds `regularization` to both the numerator
/// and denominator of the signed Jaccard index.
pub fn coincidence(v: &[f64], r: &[f64], strictness: f64, regularization: f64) -> Result<f64> {
    check_coincidence_params(strictness, regularization)?;
    let (common, union) = common_and_union(v, r)?;
    if union + regularization == 0.0 {
        return Err(Error::UndefinedSimilarity("jaccard of two all-zero vectors".into()));
    }
    let jaccard = (common + regularization) / (union + regularization);
    let interiority = interiority_signed(v, r)?;
    Ok(jaccard.powf(strictness) * interiority)
}

fn check_coincidence_params(strictness: f64, regularization: f64) -> Result<()> {
    if !(strictness > 0.0 && strictness.is_finite()) {
        return Err(Error::InvalidParameter(format!("strictness D must be positive, got {strictness}")));
    }
    if !(regularization >= 0.0 && regularization.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "regularization must be non-negative, got {regularization}"
        )));
    }
    Ok(())
}

/// Complete weighted graph of pairwise coincidence values. The diagonal is
/// zero; pairs below `threshold` are pruned to zero weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityNetwork {
    pub labels: Vec<String>,
    #[serde(rename = "d")]
    pub strictness: f64,
    pub regularization: f64,
    pub threshold: f64,
    pub weights: Vec<Vec<f64>>,
}

impl SimilarityNetwork {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i][j]
    }

    /// Retained links `(i, j, w)` with `i < j`, in index order. With a zero
    /// threshold every pair is listed.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let w = self.weights[i][j];
                if self.threshold == 0.0 || w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Mean weight over all pairs with one end in `left` and the other in
    /// `right` (pairs inside one set when both are the same set).
    pub fn mean_weight(&self, left: &[usize], right: &[usize]) -> f64 {
        let (mut sum, mut n) = (0.0, 0usize);
        for &i in left {
            for &j in right {
                if i == j || (left == right && i > j) {
                    continue;
                }
                sum += self.weights[i][j];
                n += 1;
            }
        }
        if n == 0 {
            f64::NAN
        } else {
            sum / n as f64
        }
    }

    /// `label_i,label_j,weight` lines with six decimals, header first.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label_i,label_j,weight\n");
        for (i, j, w) in self.edges() {
            out.push_str(&format!("{},{},{:.6}\n", self.labels[i], self.labels[j], w));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("network serializes");
        s.push('\n');
        s
    }
}

#[allow(clippy::needless_range_loop)]
pub fn build_similarity_network(
    matrix: &FeatureMatrix,
    strictness: f64,
    regularization: f64,
    threshold: f64,
) -> Result<SimilarityNetwork> {
    check_coincidence_params(strictness, regularization)?;
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidParameter(format!("threshold {threshold} outside [0, 1]")));
    }
    let n = matrix.shape().0;
    let mut weights = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = coincidence(matrix.row(i), matrix.row(j), strictness, regularization).map_err(|e| {
                Error::UndefinedSimilarity(format!("pair ({}, {}): {e}", matrix.labels[i], matrix.labels[j]))
            })?;
            let w = if c < threshold { 0.0 } else { c };
            weights[i][j] = w;
            weights[j][i] = w;
        }
    }
    Ok(SimilarityNetwork {
        labels: matrix.labels.clone(),
        strictness,
        regularization,
        threshold,
        weights,
    })
}
